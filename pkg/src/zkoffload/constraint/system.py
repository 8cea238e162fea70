"""Rank-1 constraint systems.

Variable 0 is the constant one, then the public inputs, then the private
(witness) variables. A system can be built in two modes: structure only, or
with a value track so that the gadgets fill in the assignment while they emit
constraints. Both modes must emit exactly the same rows.
"""

from __future__ import annotations

import hashlib
from enum import Enum

from ..algebra.field import MODULUS, FieldElement


class ConstraintError(Exception):
    """Malformed constraint system usage."""


class Visibility(Enum):
    PUBLIC = "public"
    PRIVATE = "private"


PUBLIC = Visibility.PUBLIC
PRIVATE = Visibility.PRIVATE


class LinearCombination:
    """Sparse sum of coefficient * variable; variable 0 carries constants."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, int] | None = None):
        self.terms = {}
        if terms:
            for i, c in terms.items():
                c %= MODULUS
                if c:
                    self.terms[int(i)] = c

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> LinearCombination:
        lc = cls.__new__(cls)
        lc.terms = terms
        return lc

    @classmethod
    def constant(cls, c: int) -> LinearCombination:
        return cls({0: int(c)})

    @classmethod
    def of(cls, x) -> LinearCombination:
        if isinstance(x, LinearCombination):
            return x
        if isinstance(x, Variable):
            return cls._raw({int(x): 1})
        if isinstance(x, (int, FieldElement)):
            return cls.constant(int(x))
        raise TypeError(f"cannot make a linear combination from {type(x).__name__}")

    def sorted_terms(self) -> list[tuple[int, int]]:
        return sorted(self.terms.items())

    def max_index(self) -> int:
        return max(self.terms, default=0)

    def evaluate(self, z) -> int:
        total = 0
        for i, c in self.terms.items():
            total += c * z[i]
        return total % MODULUS

    def __add__(self, other):
        other = LinearCombination.of(other)
        out = dict(self.terms)
        for i, c in other.terms.items():
            v = (out.get(i, 0) + c) % MODULUS
            if v:
                out[i] = v
            else:
                out.pop(i, None)
        return LinearCombination._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LinearCombination._raw({i: MODULUS - c for i, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-LinearCombination.of(other))

    def __rsub__(self, other):
        return LinearCombination.of(other) - self

    def __mul__(self, k):
        if not isinstance(k, (int, FieldElement)):
            return NotImplemented
        k = int(k) % MODULUS
        if not k:
            return LinearCombination()
        return LinearCombination._raw({i: c * k % MODULUS for i, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LinearCombination):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        parts = [f"{c}*x{i}" if i else str(c) for i, c in self.sorted_terms()]
        return "LC(" + " + ".join(parts or ["0"]) + ")"


class Variable(int):
    """Index of an allocated variable. Arithmetic builds linear combinations."""

    def lc(self) -> LinearCombination:
        return LinearCombination._raw({int(self): 1})

    def __add__(self, other):
        return self.lc() + other

    __radd__ = __add__

    def __sub__(self, other):
        return self.lc() - other

    def __rsub__(self, other):
        return LinearCombination.of(other) - self.lc()

    def __neg__(self):
        return -self.lc()

    def __mul__(self, k):
        return self.lc() * k

    __rmul__ = __mul__

    def __repr__(self):
        return f"Variable({int(self)})"


ONE = Variable(0)


class Assignment:
    """Full variable assignment: constant one, public inputs, private values."""

    __slots__ = ("values", "num_public")

    def __init__(self, values, num_public: int):
        self.values = [int(v) % MODULUS for v in values]
        self.num_public = num_public
        if not self.values or self.values[0] != 1:
            raise ConstraintError("assignment[0] must be the constant 1")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i) -> FieldElement:
        return FieldElement(self.values[i])

    def public_inputs(self) -> list[FieldElement]:
        return [FieldElement(v) for v in self.values[1 : 1 + self.num_public]]

    def with_value(self, index: int, value: int) -> Assignment:
        vals = list(self.values)
        vals[index] = value
        out = Assignment.__new__(Assignment)
        out.values = [v % MODULUS for v in vals]
        out.num_public = self.num_public
        return out


class ConstraintSystem:
    """Builder and container for an R1CS instance."""

    def __init__(self, witness: bool = False, record: bool = True):
        self.num_public = 0
        self.num_private = 0
        self.constraints: list[tuple[LinearCombination, LinearCombination, LinearCombination]] = []
        self.finalized = False
        self._values: list[int] | None = [1] if witness else None
        self._digest: bytes | None = None
        # a values-only build skips row bookkeeping; the caller supplies the rows
        self.record = record or not witness

    @property
    def num_variables(self) -> int:
        return 1 + self.num_public + self.num_private

    @property
    def has_witness(self) -> bool:
        return self._values is not None

    def alloc(self, visibility: Visibility = PRIVATE, value=None) -> Variable:
        if self.finalized:
            raise ConstraintError("cannot allocate in a finalized system")
        if visibility is PUBLIC:
            if self.num_private:
                raise ConstraintError("public variables must be allocated before private ones")
            self.num_public += 1
        else:
            self.num_private += 1
        if self._values is not None:
            if value is None:
                raise ConstraintError("witness mode requires a value for every allocation")
            self._values.append(int(value) % MODULUS)
        return Variable(self.num_variables - 1)

    def enforce(self, a, b, c) -> None:
        if self.finalized:
            raise ConstraintError("cannot add constraints to a finalized system")
        if not self.record:
            return
        row = (LinearCombination.of(a), LinearCombination.of(b), LinearCombination.of(c))
        limit = self.num_variables
        for lc in row:
            if lc.terms and lc.max_index() >= limit:
                raise ConstraintError(f"unknown variable index {lc.max_index()}")
        self.constraints.append(row)

    def finalize(self) -> ConstraintSystem:
        self.finalized = True
        return self

    # -- witness track ----------------------------------------------------

    def value(self, x) -> int | None:
        """Current value of a variable or linear combination (witness mode only)."""
        if self._values is None:
            return None
        if isinstance(x, Variable):
            return self._values[x]
        return LinearCombination.of(x).evaluate(self._values)

    def assignment(self) -> Assignment:
        if self._values is None:
            raise ConstraintError("system was built without a witness")
        return Assignment(self._values, self.num_public)

    # -- inspection -------------------------------------------------------

    def is_satisfied(self, z) -> bool:
        return is_satisfied(self, z)

    def first_violation(self, z) -> int | None:
        vals = z.values if isinstance(z, Assignment) else [int(v) % MODULUS for v in z]
        for k, (a, b, c) in enumerate(self.constraints):
            if a.evaluate(vals) * b.evaluate(vals) % MODULUS != c.evaluate(vals):
                return k
        return None

    def digest(self) -> bytes:
        """SHA-256 over a canonical encoding of the system (cached once finalized)."""
        if self._digest is not None:
            return self._digest
        h = hashlib.sha256()
        h.update(b"zkoffload.r1cs.v1")
        h.update(self.num_public.to_bytes(4, "little"))
        h.update(self.num_private.to_bytes(4, "little"))
        h.update(len(self.constraints).to_bytes(4, "little"))
        for row in self.constraints:
            for lc in row:
                terms = lc.sorted_terms()
                h.update(len(terms).to_bytes(4, "little"))
                for i, c in terms:
                    h.update(i.to_bytes(4, "little"))
                    h.update(c.to_bytes(32, "little"))
        digest = h.digest()
        if self.finalized:
            self._digest = digest
        return digest

    def __repr__(self):
        return (f"ConstraintSystem(public={self.num_public}, private={self.num_private}, "
                f"constraints={len(self.constraints)})")


def is_satisfied(cs: ConstraintSystem, z) -> bool:
    """True iff every row satisfies <A,z> * <B,z> = <C,z>."""
    vals = z.values if isinstance(z, Assignment) else [int(v) % MODULUS for v in z]
    if len(vals) != cs.num_variables:
        raise ConstraintError(f"assignment has {len(vals)} entries, system has {cs.num_variables} variables")
    if vals[0] != 1:
        return False
    return cs.first_violation(vals) is None
