"""The TSP verification circuit and the matching out-of-circuit hash.

Public inputs, in order:

    [sum, hash_of_path.limb0, hash_of_path.limb1,
     hash_of_cities.limb0, hash_of_cities.limb1, expected_return]

Private inputs: the padded path, the map number and the padded city list.
The distance table of one map is baked in as constants, so there is one
circuit per (mapnumber, tier).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra.field import MODULUS, FieldElement
from ..constraint import mimc
from ..constraint.gadgets import (
    gadget_equal,
    gadget_hash,
    gadget_one_hot,
    gadget_path_sum,
    gadget_permutation_check,
    gadget_range_check,
)
from ..constraint.mimc import HashDigest
from ..constraint.system import PRIVATE, PUBLIC, ConstraintSystem
from .model import TIERS, TaskSpec, Tour, TspError, TspMap, pad_path

NUM_PUBLIC = 6
EXPECTED_RETURN = 1


def hash_elements(xs) -> HashDigest:
    """Out-of-circuit evaluation of the algebraic hash used by the circuit."""
    xs = list(xs)
    if not xs:
        raise ValueError("cannot hash an empty list")
    d0, d1 = mimc.sponge(xs)
    return HashDigest(FieldElement(d0), FieldElement(d1))


class MapRegistry:
    """Maps known to the verifier side, keyed by map number."""

    def __init__(self, maps=()):
        self._maps: dict[int, TspMap] = {}
        for m in maps:
            self.register(m)

    def register(self, m: TspMap) -> None:
        known = self._maps.get(m.mapnumber)
        if known is not None and known != m:
            raise TspError(f"map number {m.mapnumber} already registered with different data")
        self._maps[m.mapnumber] = m

    def get(self, mapnumber: int) -> TspMap:
        try:
            return self._maps[mapnumber]
        except KeyError:
            raise TspError(f"unregistered map number {mapnumber}") from None

    def __contains__(self, mapnumber) -> bool:
        return mapnumber in self._maps

    def __iter__(self):
        return iter(self._maps.values())


@dataclass(frozen=True)
class TspInputs:
    """Everything the prover feeds the circuit."""

    public: list[int]
    path: list[int]
    mapnumber: int
    cities: list[int]

    @property
    def private(self) -> dict:
        return {"path": list(self.path), "mapnumber": self.mapnumber, "cities": list(self.cities)}


def public_inputs_for(tour_sum: int, padded_path, padded_cities) -> list[int]:
    hp = hash_elements(padded_path).as_ints()
    hc = hash_elements(padded_cities).as_ints()
    return [int(tour_sum) % MODULUS, hp[0], hp[1], hc[0], hc[1], EXPECTED_RETURN]


def make_inputs(m: TspMap, task: TaskSpec, tour: Tour) -> TspInputs:
    path = pad_path(tour.path, task.tier)
    cities = pad_path(task.cities, task.tier)
    return TspInputs(public_inputs_for(tour.sum, path, cities), path, m.mapnumber, cities)


class TspCircuit:
    """Builder for the TSP circuit of one (map, tier) pair."""

    def __init__(self, m: TspMap, tier: int, registry: MapRegistry | None = None):
        if tier not in TIERS:
            raise TspError(f"invalid tier {tier}; expected one of {TIERS}")
        if registry is not None:
            known = registry.get(m.mapnumber)
            if known != m:
                raise TspError(f"map {m.mapnumber} differs from the registered map")
        if tier * max(m.max_distance(), 1) >= MODULUS:
            raise TspError("maximum tour length would overflow the field")
        self.map = m
        self.tier = tier
        self._structure: ConstraintSystem | None = None

    @property
    def num_public(self) -> int:
        return NUM_PUBLIC

    def synthesize(self, cs: ConstraintSystem, public=None, private=None) -> ConstraintSystem:
        """Emit the circuit into `cs`; with inputs, also fill the witness track."""
        T = self.tier
        n = self.map.n
        if public is not None:
            if private is None:
                raise TspError("private inputs missing")
            pub = [int(v) for v in public]
            if len(pub) != NUM_PUBLIC:
                raise TspError(f"expected {NUM_PUBLIC} public inputs, got {len(pub)}")
            path_vals = [int(v) for v in private["path"]]
            city_vals = [int(v) for v in private["cities"]]
            if len(path_vals) != T or len(city_vals) != T:
                raise TspError(f"path and cities must have exactly {T} entries")
            mapnumber = int(private["mapnumber"])
        else:
            pub = [None] * NUM_PUBLIC
            path_vals = [None] * T
            city_vals = [None] * T
            mapnumber = None

        total, hp0, hp1, hc0, hc1, ret = (cs.alloc(PUBLIC, v) for v in pub)
        path = [cs.alloc(PRIVATE, v) for v in path_vals]
        mapvar = cs.alloc(PRIVATE, mapnumber)
        cities = [cs.alloc(PRIVATE, v) for v in city_vals]

        gadget_equal(cs, ret, EXPECTED_RETURN)

        # input check: indices in 0..n, the map is the one baked in
        for v in (*path, *cities):
            gadget_range_check(cs, v, n)
        gadget_equal(cs, mapvar, self.map.mapnumber)

        # every city exactly once
        gadget_permutation_check(cs, path, cities)

        # stated length equals the closed tour length
        selectors = [gadget_one_hot(cs, p, n + 1) for p in path]
        gadget_path_sum(cs, path, self.map.padded_table(), total, slot_selectors=selectors)

        # bind the public digests to the private arrays
        d0, d1 = gadget_hash(cs, path)
        gadget_equal(cs, d0, hp0)
        gadget_equal(cs, d1, hp1)
        d0, d1 = gadget_hash(cs, cities)
        gadget_equal(cs, d0, hc0)
        gadget_equal(cs, d1, hc1)
        return cs.finalize()

    def build(self) -> ConstraintSystem:
        """The constraint system (built once, then shared)."""
        if self._structure is None:
            self._structure = self.synthesize(ConstraintSystem())
        return self._structure

    def build_with_witness(self, public, private, record: bool = False) -> ConstraintSystem:
        """System with the witness filled in.

        By default only the values are computed and the rows are taken from
        the cached structure; `record=True` emits the rows again.
        """
        if record:
            return self.synthesize(ConstraintSystem(witness=True), public, private)
        structure = self.build()
        cs = self.synthesize(ConstraintSystem(witness=True, record=False), public, private)
        if cs.num_variables != structure.num_variables or cs.num_public != structure.num_public:
            raise TspError("witness build diverged from the circuit structure")
        cs.constraints = structure.constraints
        cs.record = True
        return cs


def build_tsp_circuit(m: TspMap, tier: int, registry: MapRegistry | None = None) -> ConstraintSystem:
    return TspCircuit(m, tier, registry).build()
