"""TSP maps, tours, task specs and the plain validity checker."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

TIERS = (10, 20, 30, 40, 50, 60)
SENTINEL = 0


class TspError(ValueError):
    """Malformed TSP input (unknown city, bad tier, oversized instance...)."""


@dataclass(frozen=True)
class TspMap:
    mapnumber: int
    n: int
    dist: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        dist = tuple(tuple(int(d) for d in row) for row in self.dist)
        object.__setattr__(self, "dist", dist)
        if self.mapnumber < 1:
            raise TspError("mapnumber must be >= 1")
        if len(dist) != self.n or any(len(row) != self.n for row in dist):
            raise TspError(f"distance matrix must be {self.n}x{self.n}")
        for i in range(self.n):
            if dist[i][i] != 0:
                raise TspError(f"dist[{i}][{i}] must be 0")
            for j in range(self.n):
                if dist[i][j] < 0:
                    raise TspError("distances must be non-negative")
                if dist[i][j] != dist[j][i]:
                    raise TspError(f"distance matrix not symmetric at ({i}, {j})")

    @property
    def cities(self) -> list[int]:
        return list(range(1, self.n + 1))

    def d(self, a: int, b: int) -> int:
        """Distance between cities a and b (1-based)."""
        if not (1 <= a <= self.n and 1 <= b <= self.n):
            raise TspError(f"city not on map {self.mapnumber}: {a if not 1 <= a <= self.n else b}")
        return self.dist[a - 1][b - 1]

    def padded_table(self) -> list[list[int]]:
        """(n+1)x(n+1) table indexed by city id, row/column 0 for the sentinel."""
        table = [[0] * (self.n + 1)]
        for row in self.dist:
            table.append([0, *row])
        return table

    def max_distance(self) -> int:
        return max((max(row) for row in self.dist), default=0)

    def to_json(self) -> dict:
        return {"mapnumber": self.mapnumber, "n": self.n, "dist": [list(r) for r in self.dist]}

    @classmethod
    def from_json(cls, data: dict) -> TspMap:
        return cls(int(data["mapnumber"]), int(data["n"]), tuple(tuple(r) for r in data["dist"]))

    @classmethod
    def load(cls, path) -> TspMap:
        return cls.from_json(json.loads(Path(path).read_text()))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), separators=(",", ":")) + "\n")


def generate_map(mapnumber: int, n: int, seed: int, low: int = 1, high: int = 100) -> TspMap:
    """Synthetic symmetric map with integer distances uniform in [low, high]."""
    rng = random.Random(seed)
    dist = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            dist[i][j] = dist[j][i] = rng.randint(low, high)
    return TspMap(mapnumber, n, tuple(tuple(r) for r in dist))


@dataclass(frozen=True)
class Tour:
    path: tuple[int, ...]
    sum: int

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(int(c) for c in self.path))
        object.__setattr__(self, "sum", int(self.sum))


def tier_for(size: int) -> int:
    """Smallest circuit tier that fits an instance of `size` cities."""
    for t in TIERS:
        if size <= t:
            return t
    raise TspError(f"instance of {size} cities exceeds the largest tier {TIERS[-1]}")


@dataclass(frozen=True)
class TaskSpec:
    mapnumber: int
    cities: tuple[int, ...]
    tier: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "cities", tuple(int(c) for c in self.cities))
        tier = self.tier or tier_for(len(self.cities))
        object.__setattr__(self, "tier", tier)
        if tier not in TIERS:
            raise TspError(f"invalid tier {tier}; expected one of {TIERS}")
        if not self.cities:
            raise TspError("empty instance")
        if len(self.cities) > tier:
            raise TspError(f"instance of {len(self.cities)} cities does not fit tier {tier}")
        if len(set(self.cities)) != len(self.cities):
            raise TspError("instance lists a city twice")

    def to_json(self) -> dict:
        return {"mapnumber": self.mapnumber, "cities": list(self.cities), "tier": self.tier}

    @classmethod
    def from_json(cls, data: dict) -> TaskSpec:
        return cls(int(data["mapnumber"]), tuple(data["cities"]), int(data["tier"]))


def tour_length(m: TspMap, path) -> int:
    path = list(path)
    if not path:
        return 0
    return sum(m.d(path[i], path[(i + 1) % len(path)]) for i in range(len(path)))


def validate_tour(m: TspMap, instance_cities, tour: Tour) -> bool:
    """Is the path a permutation of the instance with the stated closed length?

    Cities that do not exist on the map are an error, not a False verdict.
    """
    for c in (*instance_cities, *tour.path):
        if not 1 <= int(c) <= m.n:
            raise TspError(f"city {c} is not on map {m.mapnumber}")
    if sorted(tour.path) != sorted(int(c) for c in instance_cities):
        return False
    return tour_length(m, tour.path) == tour.sum


def pad_path(path, tier: int) -> list[int]:
    path = list(path)
    if len(path) > tier:
        raise TspError(f"path of length {len(path)} does not fit tier {tier}")
    return path + [SENTINEL] * (tier - len(path))


def pad_tour(tour: Tour, tier: int) -> list[int]:
    """Path extended with the sentinel to exactly `tier` entries."""
    return pad_path(tour.path, tier)


def unpad(path) -> list[int]:
    return [c for c in path if c != SENTINEL]
