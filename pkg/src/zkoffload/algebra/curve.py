"""The two BN254 groups.

G1 is y^2 = x^3 + 3 over Fp; G2 is the sextic twist y^2 = x^3 + 3/(9+i) over
Fp2. Points are kept in affine form: gmpy2 inversion is cheap enough that
projective coordinates buy little in CPython. The identity is ``None`` in the
raw layer and ``G1Point.identity()`` / ``G2Point.identity()`` above it.
"""

from __future__ import annotations

from gmpy2 import invert, mpz

from .field import FieldElement
from .tower import (
    FP2_ZERO,
    P,
    R,
    fp2_add,
    fp2_inv,
    fp2_mul,
    fp2_neg,
    fp2_sqr,
    fp2_sub,
)

B1 = mpz(3)
B2 = fp2_mul((mpz(3), mpz(0)), fp2_inv((mpz(9), mpz(1))))

G1_GENERATOR_XY = (mpz(1), mpz(2))
G2_GENERATOR_XY = (
    (
        mpz(10857046999023057135944570762232829481370756359578518086990519993285655852781),
        mpz(11559732032986387107991004021392285783925812861821192530917403151452391805634),
    ),
    (
        mpz(8495653923123431417604973247489272438418190587263600148770280649306958101930),
        mpz(4082367875863433681332203403145435568316851327593401208105741076214120093531),
    ),
)


# -- raw G1 ------------------------------------------------------------------

def g1_on_curve(pt) -> bool:
    if pt is None:
        return True
    x, y = pt
    if not (0 <= x < P and 0 <= y < P):
        return False
    return (y * y - x * x * x - B1) % P == 0


def g1_neg(pt):
    if pt is None:
        return None
    return (pt[0], -pt[1] % P)


def g1_double(pt):
    if pt is None:
        return None
    x, y = pt
    if y == 0:
        return None
    lam = 3 * x * x * invert(2 * y, P) % P
    x3 = (lam * lam - 2 * x) % P
    return (x3, (lam * (x - x3) - y) % P)


def g1_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if y1 == y2:
            return g1_double(p1)
        return None
    lam = (y2 - y1) * invert(x2 - x1, P) % P
    x3 = (lam * lam - x1 - x2) % P
    return (x3, (lam * (x1 - x3) - y1) % P)


def g1_mul(pt, k: int):
    """[k]pt for a non-negative integer k (not reduced mod r)."""
    result = None
    addend = pt
    while k:
        if k & 1:
            result = g1_add(result, addend)
        addend = g1_double(addend)
        k >>= 1
    return result


# -- raw G2 ------------------------------------------------------------------

def g2_on_curve(pt) -> bool:
    if pt is None:
        return True
    x, y = pt
    for c in (*x, *y):
        if not 0 <= c < P:
            return False
    lhs = fp2_sqr(y)
    rhs = fp2_add(fp2_mul(fp2_sqr(x), x), B2)
    return lhs == rhs


def g2_neg(pt):
    if pt is None:
        return None
    return (pt[0], fp2_neg(pt[1]))


def g2_double(pt):
    if pt is None:
        return None
    x, y = pt
    if y == FP2_ZERO:
        return None
    xx = fp2_sqr(x)
    lam = fp2_mul(fp2_add(fp2_add(xx, xx), xx), fp2_inv(fp2_add(y, y)))
    x3 = fp2_sub(fp2_sqr(lam), fp2_add(x, x))
    return (x3, fp2_sub(fp2_mul(lam, fp2_sub(x, x3)), y))


def g2_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if y1 == y2:
            return g2_double(p1)
        return None
    lam = fp2_mul(fp2_sub(y2, y1), fp2_inv(fp2_sub(x2, x1)))
    x3 = fp2_sub(fp2_sub(fp2_sqr(lam), x1), x2)
    return (x3, fp2_sub(fp2_mul(lam, fp2_sub(x1, x3)), y1))


def g2_mul(pt, k: int):
    result = None
    addend = pt
    while k:
        if k & 1:
            result = g2_add(result, addend)
        addend = g2_double(addend)
        k >>= 1
    return result


# -- multi-scalar multiplication ---------------------------------------------

def _window_size(n: int) -> int:
    if n < 8:
        return 2
    if n < 64:
        return 4
    if n < 1024:
        return 7
    if n < 16384:
        return 10
    return 13


def pippenger(points, scalars, add, double=None):
    """Bucket-method sum of [s_i]P_i over raw points; scalars are ints in [0, r)."""
    pairs = [(pt, int(s)) for pt, s in zip(points, scalars) if s and pt is not None]
    if not pairs:
        return None
    max_bits = max(s for _, s in pairs).bit_length()
    c = _window_size(len(pairs))
    mask = (1 << c) - 1
    windows = []
    for shift in range(0, max_bits, c):
        buckets = [None] * (mask + 1)
        for pt, s in pairs:
            d = (s >> shift) & mask
            if d:
                b = buckets[d]
                buckets[d] = pt if b is None else add(b, pt)
        running = None
        total = None
        for d in range(mask, 0, -1):
            b = buckets[d]
            if b is not None:
                running = add(running, b)
            if running is not None:
                total = add(total, running)
        windows.append(total)
    acc = None
    for total in reversed(windows):
        if acc is not None:
            for _ in range(c):
                acc = add(acc, acc)
        acc = add(acc, total)
    return acc


class FixedBase:
    """Windowed precomputation for many multiplications of one base point."""

    def __init__(self, pt, add, window: int = 8, bits: int = 254):
        self.add = add
        self.window = window
        self.mask = (1 << window) - 1
        self.tables = []
        base = pt
        for _ in range(0, bits, window):
            row = [None]
            acc = None
            for _ in range(self.mask):
                acc = add(acc, base)
                row.append(acc)
            self.tables.append(row)
            for _ in range(window):
                base = add(base, base)

    def mul(self, k: int):
        add = self.add
        mask = self.mask
        w = self.window
        acc = None
        for row in self.tables:
            if not k:
                break
            d = k & mask
            if d:
                acc = add(acc, row[d])
            k >>= w
        return acc


# -- public point types -------------------------------------------------------

def _scalar(k) -> int:
    if isinstance(k, FieldElement):
        return k.value
    return int(k) % int(R)


class _Point:
    __slots__ = ("_pt",)
    _add = staticmethod(g1_add)
    _neg = staticmethod(g1_neg)
    _mul = staticmethod(g1_mul)
    _on_curve = staticmethod(g1_on_curve)
    _generator = G1_GENERATOR_XY

    def __init__(self, raw=None, *, check: bool = True):
        if check and not self._on_curve(raw):
            raise ValueError(f"point is not on the {type(self).__name__} curve")
        self._pt = raw

    @classmethod
    def identity(cls):
        return cls(None, check=False)

    @classmethod
    def generator(cls):
        return cls(cls._generator, check=False)

    @property
    def raw(self):
        return self._pt

    def is_identity(self) -> bool:
        return self._pt is None

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(self._add(self._pt, other._pt), check=False)

    def __neg__(self):
        return type(self)(self._neg(self._pt), check=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return type(self)(self._mul(self._pt, _scalar(k)), check=False)

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._pt == other._pt

    def __hash__(self):
        return hash((type(self).__name__, self._pt))

    def in_subgroup(self) -> bool:
        return self._mul(self._pt, int(R)) is None


class G1Point(_Point):
    """Affine point of G1 (coordinates in Fp)."""

    __slots__ = ()

    @classmethod
    def from_xy(cls, x: int, y: int) -> G1Point:
        return cls((mpz(x), mpz(y)))

    def xy(self) -> tuple[int, int]:
        if self._pt is None:
            return (0, 0)
        return (int(self._pt[0]), int(self._pt[1]))

    def in_subgroup(self) -> bool:
        # G1 has prime order r, so every curve point qualifies.
        return True

    def __repr__(self):
        if self._pt is None:
            return "G1Point(identity)"
        return f"G1Point({int(self._pt[0])}, {int(self._pt[1])})"


class G2Point(_Point):
    """Affine point of the twist group G2 (coordinates in Fp2)."""

    __slots__ = ()
    _add = staticmethod(g2_add)
    _neg = staticmethod(g2_neg)
    _mul = staticmethod(g2_mul)
    _on_curve = staticmethod(g2_on_curve)
    _generator = G2_GENERATOR_XY

    @classmethod
    def from_xy(cls, x: tuple[int, int], y: tuple[int, int]) -> G2Point:
        return cls(((mpz(x[0]), mpz(x[1])), (mpz(y[0]), mpz(y[1]))))

    def xy(self) -> tuple[tuple[int, int], tuple[int, int]]:
        if self._pt is None:
            return ((0, 0), (0, 0))
        (x0, x1), (y0, y1) = self._pt
        return ((int(x0), int(x1)), (int(y0), int(y1)))

    def __repr__(self):
        if self._pt is None:
            return "G2Point(identity)"
        return f"G2Point{self.xy()}"


def scalar_mul(point, k):
    """[k]point for either group; k is reduced modulo the group order."""
    return point * k


def multi_scalar_combine(points, scalars):
    """Sum of [s_i]P_i. All points must come from the same group."""
    points = list(points)
    scalars = list(scalars)
    if len(points) != len(scalars):
        raise ValueError(f"length mismatch: {len(points)} points, {len(scalars)} scalars")
    if not points:
        return G1Point.identity()
    cls = type(points[0])
    if any(type(p) is not cls for p in points):
        raise TypeError("cannot mix G1 and G2 points")
    add = cls._add
    raw = pippenger([p.raw for p in points], [_scalar(s) for s in scalars], add)
    return cls(raw, check=False)
