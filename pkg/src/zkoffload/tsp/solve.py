"""Solvers run by the service provider (the circuit never sees them)."""

from __future__ import annotations

import itertools
import random

from .model import Tour, TspError, TspMap, tour_length

EXACT_LIMIT = 10


def solve_exact(m: TspMap, instance_cities) -> Tour:
    """Brute-force optimum; the first city is fixed to skip rotations."""
    cities = [int(c) for c in instance_cities]
    if not cities:
        raise TspError("empty instance")
    if len(cities) > EXACT_LIMIT:
        raise TspError(f"exact solver supports at most {EXACT_LIMIT} cities, got {len(cities)}")
    for c in cities:
        m.d(c, c)
    first, rest = cities[0], cities[1:]
    best_path, best = None, None
    dist = m.dist
    for perm in itertools.permutations(rest):
        path = (first, *perm)
        total = 0
        prev = first
        for c in perm:
            total += dist[prev - 1][c - 1]
            prev = c
        total += dist[prev - 1][first - 1]
        if best is None or total < best:
            best, best_path = total, path
    return Tour(best_path, best)


def _two_opt(m: TspMap, path: list[int]) -> list[int]:
    n = len(path)
    if n < 4:
        return path
    d = m.d
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            for j in range(i + 2, n if i > 0 else n - 1):
                a, b = path[i], path[i + 1]
                c, e = path[j], path[(j + 1) % n]
                delta = d(a, c) + d(b, e) - d(a, b) - d(c, e)
                if delta < 0:
                    path[i + 1 : j + 1] = reversed(path[i + 1 : j + 1])
                    improved = True
    return path


def solve_heuristic(m: TspMap, instance_cities, seed: int = 0) -> Tour:
    """Nearest neighbour from a seeded start, then 2-opt to a local optimum."""
    cities = [int(c) for c in instance_cities]
    if not cities:
        raise TspError("empty instance")
    rng = random.Random(seed)
    start = cities[rng.randrange(len(cities))]
    remaining = set(cities)
    remaining.discard(start)
    path = [start]
    while remaining:
        here = path[-1]
        nxt = min(remaining, key=lambda c: (m.d(here, c), c))
        path.append(nxt)
        remaining.remove(nxt)
    path = _two_opt(m, path)
    return Tour(tuple(path), tour_length(m, path))
