"""MiMC-Feistel sponge over the scalar field.

Permutation on a two-element state (left, right), 91 rounds:

    t = left + key + c_i
    left, right = right + t^3, left      (no swap in the last round)

The sponge absorbs one element per permutation into ``left`` (``right`` is
the capacity) and squeezes two digest limbs. Round constants come from
SHA-256 over a fixed public seed; constant 0 is forced to zero.

Round count follows the project's hash parameters and is not a security
claim for cube MiMC at this field size.
"""

from __future__ import annotations

import hashlib
from typing import NamedTuple

from ..algebra.field import MODULUS, FieldElement

ROUNDS = 91
SEED = b"zkoffload.mimc-feistel.v1"
KEY = 0


def _round_constants(seed: bytes = SEED, rounds: int = ROUNDS) -> tuple[int, ...]:
    out = [0]
    for i in range(1, rounds):
        h = hashlib.sha256(seed + i.to_bytes(4, "big")).digest()
        out.append(int.from_bytes(h, "big") % MODULUS)
    return tuple(out)


ROUND_CONSTANTS = _round_constants()


class HashDigest(NamedTuple):
    limb0: FieldElement
    limb1: FieldElement

    def as_ints(self) -> tuple[int, int]:
        return (self.limb0.value, self.limb1.value)


def permute(left: int, right: int, key: int = KEY) -> tuple[int, int]:
    p = MODULUS
    last = ROUNDS - 1
    for i, c in enumerate(ROUND_CONSTANTS):
        t = (left + key + c) % p
        t3 = t * t % p * t % p
        if i < last:
            left, right = (right + t3) % p, left
        else:
            right = (right + t3) % p
    return left, right


def sponge(xs) -> tuple[int, int]:
    """Plain evaluation of the sponge; returns the two digest limbs as ints."""
    xs = [int(x) % MODULUS for x in xs]
    if not xs:
        raise ValueError("cannot hash an empty sequence")
    left, right = 0, 0
    for x in xs:
        left, right = permute((left + x) % MODULUS, right)
    out0 = left
    left, right = permute(left, right)
    return out0, left
