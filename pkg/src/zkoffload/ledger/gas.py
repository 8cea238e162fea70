"""Synthetic gas cost model.

The schedule is a flat set of named integer constants. Contracts charge
against a GasMeter by name, so every receipt can be traced back to the
schedule entries that produced it.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class GasSchedule:
    tx_base: int = 21000
    calldata_word: int = 512
    storage_write: int = 20000
    storage_read: int = 2100
    arith_step: int = 40
    call: int = 700
    transfer: int = 9000
    deploy: int = 32000
    hash_element: int = 4200
    verify_base: int = 45000
    pairing: int = 80000
    pairing_base: int = 100000
    public_input: int = 34000
    pairings_per_verify: int = 4

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"gas constant {f.name} must be a non-negative integer, got {v!r}")

    def to_dict(self) -> dict[str, int]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> GasSchedule:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown gas constants: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> GasSchedule:
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def default(cls) -> GasSchedule:
        text = resources.files("zkoffload.data").joinpath("gas_schedule.json").read_text()
        return cls.from_dict(json.loads(text))

    def verify_cost(self, num_inputs: int) -> int:
        """Cost of one proof check: fixed part, the pairings, and the input combination."""
        return (self.verify_base + self.pairing_base + self.pairing * self.pairings_per_verify
                + self.public_input * num_inputs)


class OutOfGas(Exception):
    pass


class GasMeter:
    """Accumulates charges for a single transaction."""

    def __init__(self, schedule: GasSchedule, limit: int | None = None):
        self.schedule = schedule
        self.limit = limit
        self.used = 0
        self.items: dict[str, int] = {}

    def charge(self, item: str, count: int = 1) -> None:
        if count < 0:
            raise ValueError("negative gas count")
        cost = getattr(self.schedule, item) * count
        self.used += cost
        self.items[item] = self.items.get(item, 0) + cost
        if self.limit is not None and self.used > self.limit:
            raise OutOfGas(f"gas limit {self.limit} exceeded")

    def charge_amount(self, item: str, amount: int) -> None:
        self.used += amount
        self.items[item] = self.items.get(item, 0) + amount
        if self.limit is not None and self.used > self.limit:
            raise OutOfGas(f"gas limit {self.limit} exceeded")
