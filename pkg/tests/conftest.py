"""Shared fixtures: the packaged maps, the key cache and a few tiny circuits."""

from __future__ import annotations

import pytest

from zkoffload.constraint import PRIVATE, PUBLIC, ConstraintSystem
from zkoffload.harness import KeyStore, ScenarioConfig
from zkoffload.harness.config import DEFAULT_KEYS_DIR
from zkoffload.tsp import TspMap


class MulCircuit:
    """x * y = out with `out` public; `extra` adds a second public copy of x."""

    def __init__(self, extra: bool = False):
        self.extra = extra

    def synthesize(self, cs, public=None, private=None):
        pub = list(public) if public is not None else [None] * (2 if self.extra else 1)
        priv = list(private) if private is not None else [None, None]
        out = cs.alloc(PUBLIC, pub[0])
        if self.extra:
            xp = cs.alloc(PUBLIC, pub[1])
        x = cs.alloc(PRIVATE, priv[0])
        y = cs.alloc(PRIVATE, priv[1])
        cs.enforce(x, y, out)
        if self.extra:
            cs.enforce(x - xp, 1, 0)
        return cs.finalize()

    def build(self):
        return self.synthesize(ConstraintSystem())

    def build_with_witness(self, public, private):
        return self.synthesize(ConstraintSystem(witness=True), public, private)


@pytest.fixture(scope="session")
def config():
    return ScenarioConfig.default()


@pytest.fixture(scope="session")
def maps(config):
    return config.registry()


@pytest.fixture(scope="session")
def map1(maps):
    return maps.get(1)


@pytest.fixture(scope="session")
def map2(maps):
    return maps.get(2)


@pytest.fixture(scope="session")
def keys(maps):
    # keys are derived from the seed, so a warm cache only saves setup time
    return KeyStore(DEFAULT_KEYS_DIR, maps, seed=1)


@pytest.fixture(scope="session")
def tri_map():
    """d(1,2)=5, d(2,3)=7, d(1,3)=9."""
    return TspMap(9, 3, ((0, 5, 9), (5, 0, 7), (9, 7, 0)))


@pytest.fixture(scope="session")
def mul_circuit():
    return MulCircuit()
