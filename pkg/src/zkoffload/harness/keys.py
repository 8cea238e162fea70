"""On-disk cache of circuit key pairs, one per (mapnumber, tier)."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from ..constraint.system import ConstraintSystem
from ..snark import ProvingKey, VerifyingKey, load_proving_key, load_verifying_key, save_keys, setup
from ..tsp.circuit import MapRegistry, TspCircuit


@dataclass
class CircuitKeys:
    mapnumber: int
    tier: int
    circuit: TspCircuit
    cs: ConstraintSystem
    pk: ProvingKey
    vk: VerifyingKey


class KeyStore:
    """Builds circuits and loads or generates their keys.

    Keys are derived from `seed`, so the same store settings always produce
    byte-identical key files. `registry.json` in the directory records which
    file belongs to which (map, tier) and the constraint-system digest.
    """

    def __init__(self, directory: str | Path, maps: MapRegistry, seed: int = 1):
        self.directory = Path(directory)
        self.maps = maps
        self.seed = seed
        self._memo: dict[tuple[int, int], CircuitKeys] = {}
        self._lock = threading.Lock()

    def _stem(self, mapnumber: int, tier: int) -> Path:
        return self.directory / f"map{mapnumber}_t{tier}_s{self.seed}"

    def _registry_path(self) -> Path:
        return self.directory / "registry.json"

    def _read_registry(self) -> dict:
        p = self._registry_path()
        return json.loads(p.read_text()) if p.exists() else {}

    def _write_registry(self, reg: dict) -> None:
        self._registry_path().write_text(json.dumps(reg, indent=2, sort_keys=True) + "\n")

    def setup_seed(self, mapnumber: int, tier: int) -> bytes:
        return f"zkoffload.keys:{self.seed}:{mapnumber}:{tier}".encode()

    def get(self, mapnumber: int, tier: int) -> CircuitKeys:
        key = (mapnumber, tier)
        with self._lock:
            if key in self._memo:
                return self._memo[key]
            circuit = TspCircuit(self.maps.get(mapnumber), tier, self.maps)
            cs = circuit.build()
            digest = cs.digest().hex()
            stem = self._stem(mapnumber, tier)
            pk_path = stem.with_name(stem.name + ".pk")
            vk_path = stem.with_name(stem.name + ".vk")
            entry = self._read_registry().get(stem.name)
            pk = vk = None
            if entry and entry.get("digest") == digest and pk_path.exists() and vk_path.exists():
                pk = load_proving_key(pk_path)
                vk = load_verifying_key(vk_path)
                if pk.cs_digest != cs.digest() or vk.cs_digest != cs.digest():
                    pk = vk = None
            if pk is None:
                pk, vk = setup(cs, self.setup_seed(mapnumber, tier))
                self.directory.mkdir(parents=True, exist_ok=True)
                save_keys(pk, vk, stem)
                reg = self._read_registry()
                reg[stem.name] = {"mapnumber": mapnumber, "tier": tier, "digest": digest,
                                  "pk": pk_path.name, "vk": vk_path.name}
                self._write_registry(reg)
            ck = CircuitKeys(mapnumber, tier, circuit, cs, pk, vk)
            self._memo[key] = ck
            return ck

    def verifying_key(self, mapnumber: int, tier: int) -> VerifyingKey:
        return self.get(mapnumber, tier).vk
