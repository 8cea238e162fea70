"""Scenario configuration for the CLI and the benchmark."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..ledger.gas import GasSchedule
from ..tsp.circuit import MapRegistry
from ..tsp.model import TIERS, TspMap

MODES = ("verified", "unverified", "onchain")
DATA_DIR = Path(str(resources.files("zkoffload.data")))
DEFAULT_KEYS_DIR = Path(os.environ.get("ZKOFFLOAD_KEYS", Path.home() / ".cache" / "zkoffload" / "keys"))


def resolve_data_path(name: str | Path, base: Path | None = None) -> Path:
    """Absolute path as given, relative to `base`, or a file shipped with the package."""
    p = Path(name)
    if p.is_absolute():
        return p
    if base is not None and (base / p).exists():
        return base / p
    if p.exists():
        return p.resolve()
    return DATA_DIR / p


@dataclass
class ScenarioConfig:
    maps: dict[int, Path]
    sizes: dict[int, list[int]]
    gas_schedule: Path = DATA_DIR / "gas_schedule.json"
    tiers: tuple[int, ...] = TIERS
    modes: tuple[str, ...] = MODES
    seed: int = 1
    stake: int = 100
    min_duration: int = 3
    keys_dir: Path = DEFAULT_KEYS_DIR
    csv_path: Path | None = None
    log_path: Path | None = None
    summary_path: Path | None = None
    _registry: MapRegistry | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        for mode in self.modes:
            if mode not in MODES:
                raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
        for t in self.tiers:
            if t not in TIERS:
                raise ValueError(f"unknown tier {t}")
        for mapnumber, path in self.maps.items():
            if not Path(path).exists():
                raise ValueError(f"map file {path} for map {mapnumber} does not exist")
        if not Path(self.gas_schedule).exists():
            raise ValueError(f"gas schedule {self.gas_schedule} does not exist")
        top = max(self.tiers)
        for mapnumber, sizes in self.sizes.items():
            if mapnumber not in self.maps:
                raise ValueError(f"sizes given for unknown map {mapnumber}")
            for s in sizes:
                if not 1 <= s <= top:
                    raise ValueError(f"instance size {s} outside 1..{top}")

    def registry(self) -> MapRegistry:
        if self._registry is None:
            reg = MapRegistry()
            for mapnumber, path in sorted(self.maps.items()):
                m = TspMap.load(path)
                if m.mapnumber != mapnumber:
                    raise ValueError(f"{path} holds map {m.mapnumber}, configured as {mapnumber}")
                for s in self.sizes.get(mapnumber, []):
                    if s > m.n:
                        raise ValueError(f"size {s} exceeds the {m.n} cities of map {mapnumber}")
                reg.register(m)
            self._registry = reg
        return self._registry

    def schedule(self) -> GasSchedule:
        return GasSchedule.load(self.gas_schedule)

    @classmethod
    def from_dict(cls, data: dict, base: Path | None = None) -> ScenarioConfig:
        def opt(key):
            if not data.get(key):
                return None
            p = Path(data[key])
            return p if p.is_absolute() or base is None else base / p

        return cls(
            maps={int(k): resolve_data_path(v, base) for k, v in data["maps"].items()},
            sizes={int(k): [int(s) for s in v] for k, v in data.get("sizes", {}).items()},
            gas_schedule=resolve_data_path(data.get("gas_schedule", "gas_schedule.json"), base),
            tiers=tuple(data.get("tiers", TIERS)),
            modes=tuple(data.get("modes", MODES)),
            seed=int(data.get("seed", 1)),
            stake=int(data.get("stake", 100)),
            min_duration=int(data.get("min_duration", 3)),
            keys_dir=Path(data["keys_dir"]) if data.get("keys_dir") else DEFAULT_KEYS_DIR,
            csv_path=opt("csv"),
            log_path=opt("log"),
            summary_path=opt("summary"),
        )

    @classmethod
    def load(cls, path: str | Path) -> ScenarioConfig:
        path = resolve_data_path(path)
        return cls.from_dict(json.loads(Path(path).read_text()), base=path.parent)

    @classmethod
    def default(cls) -> ScenarioConfig:
        return cls.load(DATA_DIR / "bench_default.json")
