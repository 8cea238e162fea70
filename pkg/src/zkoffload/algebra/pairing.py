"""Optimal ate pairing on BN254.

The Miller loop walks the bits of 6u+2 with an affine accumulator on the
twist and evaluates each line directly at the G1 argument. Vertical lines are
dropped because they land in a proper subfield and die in the final
exponentiation. Several pairs can share one loop (``pairing_product``), which
is what verification uses.
"""

from __future__ import annotations

from .curve import G1Point, G2Point
from .tower import (
    BN_U,
    FP12_ONE,
    P,
    R,
    XI,
    fp2_add,
    fp2_conj,
    fp2_inv,
    fp2_mul,
    fp2_neg,
    fp2_pow,
    fp2_scale,
    fp2_sqr,
    fp2_sub,
    fp12_conj,
    fp12_frobenius,
    fp12_inv,
    fp12_mul,
    fp12_mul_line,
    fp12_pow,
    fp12_sqr,
)

ATE_LOOP_COUNT = 6 * BN_U + 2
_ATE_BITS = bin(ATE_LOOP_COUNT)[3:]  # leading one consumed by T = Q

# Frobenius on the twist: (x, y) -> (conj(x) * xi^((p-1)/3), conj(y) * xi^((p-1)/2)).
_TWIST_FROB_X = fp2_pow(XI, (P - 1) // 3)
_TWIST_FROB_Y = fp2_pow(XI, (P - 1) // 2)

# Hard part of the final exponent, written in base p for a 4-way joint ladder.
_HARD = (P**4 - P**2 + 1) // R
assert _HARD * R == P**4 - P**2 + 1
_HARD_DIGITS = []
_h = _HARD
for _ in range(4):
    _HARD_DIGITS.append(int(_h % P))
    _h //= P
assert _h == 0
del _h


def twist_frobenius(q):
    x, y = q
    return (fp2_mul(fp2_conj(x), _TWIST_FROB_X), fp2_mul(fp2_conj(y), _TWIST_FROB_Y))


def _line_step(t, q, xp, yp):
    """Return (T + Q, line coefficients) with lines through T and Q at P.

    q is None for a tangent. Coefficients are (yP, -lam*xP, lam*xT - yT),
    or None when the line is vertical.
    """
    xt, yt = t
    if q is None:
        xx = fp2_sqr(xt)
        lam = fp2_mul(fp2_add(fp2_add(xx, xx), xx), fp2_inv(fp2_add(yt, yt)))
        x3 = fp2_sub(fp2_sqr(lam), fp2_add(xt, xt))
    else:
        xq, yq = q
        if xq == xt:
            return None, None
        lam = fp2_mul(fp2_sub(yq, yt), fp2_inv(fp2_sub(xq, xt)))
        x3 = fp2_sub(fp2_sub(fp2_sqr(lam), xt), xq)
    y3 = fp2_sub(fp2_mul(lam, fp2_sub(xt, x3)), yt)
    b = fp2_neg(fp2_scale(lam, xp))
    c = fp2_sub(fp2_mul(lam, xt), yt)
    return (x3, y3), (yp, b, c)


def miller_loop(pairs):
    """Product of Miller functions f_{6u+2,Q}(P) with the two Frobenius lines.

    ``pairs`` holds raw (P, Q) points; pairs with an identity are skipped.
    """
    active = [(p, q) for p, q in pairs if p is not None and q is not None]
    f = FP12_ONE
    if not active:
        return f
    ts = [q for _, q in active]
    for bit in _ATE_BITS:
        f = fp12_sqr(f)
        for k, (pp, q) in enumerate(active):
            ts[k], line = _line_step(ts[k], None, pp[0], pp[1])
            f = fp12_mul_line(f, *line)
            if bit == "1":
                ts[k], line = _line_step(ts[k], q, pp[0], pp[1])
                f = fp12_mul_line(f, *line)
    for k, (pp, q) in enumerate(active):
        q1 = twist_frobenius(q)
        q2 = twist_frobenius(q1)
        q2 = (q2[0], fp2_neg(q2[1]))
        ts[k], line = _line_step(ts[k], q1, pp[0], pp[1])
        f = fp12_mul_line(f, *line)
        _, line = _line_step(ts[k], q2, pp[0], pp[1])
        if line is not None:
            f = fp12_mul_line(f, *line)
    return f


def final_exponentiation(f):
    # easy part: f^((p^6 - 1)(p^2 + 1)); afterwards f is unitary
    f = fp12_mul(fp12_conj(f), fp12_inv(f))
    f = fp12_mul(fp12_frobenius(fp12_frobenius(f)), f)
    # hard part: prod_j (f^(p^j))^(d_j)
    bases = [f]
    for _ in range(3):
        bases.append(fp12_frobenius(bases[-1]))
    table = [FP12_ONE] * 16
    for mask in range(1, 16):
        low = mask & -mask
        j = low.bit_length() - 1
        table[mask] = fp12_mul(table[mask ^ low], bases[j])
    d = _HARD_DIGITS
    acc = FP12_ONE
    for i in range(max(x.bit_length() for x in d) - 1, -1, -1):
        acc = fp12_sqr(acc)
        idx = ((d[0] >> i) & 1) | (((d[1] >> i) & 1) << 1) | (((d[2] >> i) & 1) << 2) | (((d[3] >> i) & 1) << 3)
        if idx:
            acc = fp12_mul(acc, table[idx])
    return acc


class TargetElement:
    """Element of the order-r subgroup of Fp12^* (the pairing's codomain)."""

    __slots__ = ("_f",)

    def __init__(self, raw):
        self._f = raw

    @classmethod
    def identity(cls) -> TargetElement:
        return cls(FP12_ONE)

    @property
    def raw(self):
        return self._f

    def is_identity(self) -> bool:
        return self._f == FP12_ONE

    def __mul__(self, other: TargetElement) -> TargetElement:
        return TargetElement(fp12_mul(self._f, other._f))

    def __pow__(self, e: int) -> TargetElement:
        e = int(e) % int(R)
        return TargetElement(fp12_pow(self._f, e))

    def inverse(self) -> TargetElement:
        # unitary after final exponentiation
        return TargetElement(fp12_conj(self._f))

    def __eq__(self, other):
        if not isinstance(other, TargetElement):
            return NotImplemented
        return self._f == other._f

    def __hash__(self):
        return hash(self._f)

    def __repr__(self):
        return "TargetElement(identity)" if self.is_identity() else "TargetElement(...)"


def pairing(p: G1Point, q: G2Point) -> TargetElement:
    """e(P, Q); bilinear and non-degenerate on the generators."""
    return TargetElement(final_exponentiation(miller_loop([(p.raw, q.raw)])))


def pairing_product(pairs) -> TargetElement:
    """prod e(P_i, Q_i) with a single shared final exponentiation."""
    return TargetElement(final_exponentiation(miller_loop([(p.raw, q.raw) for p, q in pairs])))
