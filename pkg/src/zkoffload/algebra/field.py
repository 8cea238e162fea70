"""Scalar field of BN254 (the field the constraint systems live in)."""

from __future__ import annotations

import hashlib
import secrets

from gmpy2 import invert, mpz

from .tower import R

MODULUS = int(R)

# 2-adic structure of r - 1, used by the evaluation domains.
TWO_ADICITY = 28
MULTIPLICATIVE_GENERATOR = 5


class FieldElement:
    """Element of Z/rZ, always stored in canonical form."""

    __slots__ = ("_v",)

    def __init__(self, value: int | FieldElement = 0):
        if isinstance(value, FieldElement):
            self._v = value._v
        else:
            self._v = mpz(value) % R

    @property
    def value(self) -> int:
        return int(self._v)

    @classmethod
    def zero(cls) -> FieldElement:
        return cls(0)

    @classmethod
    def one(cls) -> FieldElement:
        return cls(1)

    @classmethod
    def random(cls, rng=None) -> FieldElement:
        if rng is None:
            return cls(secrets.randbelow(MODULUS))
        return cls(rng.randrange(MODULUS))

    @classmethod
    def from_seed(cls, seed: bytes, label: bytes) -> FieldElement:
        """Deterministic element derived from (seed, label); never zero."""
        counter = 0
        while True:
            h = hashlib.sha512(b"zkoffload/fe" + len(label).to_bytes(4, "little") + label
                               + counter.to_bytes(4, "little") + seed).digest()
            v = int.from_bytes(h, "little") % MODULUS
            if v:
                return cls(v)
            counter += 1

    def _coerce(self, other) -> mpz | None:
        if isinstance(other, FieldElement):
            return other._v
        if isinstance(other, int):
            return mpz(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self._v + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self._v - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(o - self._v)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self._v * o)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self._v)

    def inv(self) -> FieldElement:
        if self._v == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return FieldElement(invert(self._v, R))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * FieldElement(o).inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        return FieldElement(pow(self._v, e, R))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._v == o % R

    def __hash__(self):
        return hash(int(self._v))

    def __int__(self):
        return int(self._v)

    def __index__(self):
        return int(self._v)

    def __bool__(self):
        return self._v != 0

    def __repr__(self):
        return f"FieldElement({int(self._v)})"

    def to_bytes(self) -> bytes:
        return int(self._v).to_bytes(32, "little")

    @classmethod
    def from_bytes(cls, data: bytes) -> FieldElement:
        v = int.from_bytes(data, "little")
        if v >= MODULUS:
            raise ValueError("non-canonical field element encoding")
        return cls(v)


def root_of_unity(n: int) -> int:
    """Primitive n-th root of unity in the scalar field (n a power of two)."""
    if n & (n - 1) or n < 1:
        raise ValueError(f"domain size must be a power of two, got {n}")
    log_n = n.bit_length() - 1
    if log_n > TWO_ADICITY:
        raise ValueError(f"domain 2^{log_n} exceeds the field's 2-adicity")
    g = pow(MULTIPLICATIVE_GENERATOR, (MODULUS - 1) >> TWO_ADICITY, MODULUS)
    return pow(g, 1 << (TWO_ADICITY - log_n), MODULUS)
