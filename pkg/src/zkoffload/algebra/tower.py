"""Raw arithmetic for the BN254 base field and its extension tower.

Elements are plain tuples of gmpy2 integers so the hot loops (Miller loop,
final exponentiation, G2 group law) avoid per-object overhead:

    Fp2  = Fp[i] / (i^2 + 1)           -> (a0, a1)
    Fp6  = Fp2[v] / (v^3 - xi), xi=9+i -> (c0, c1, c2)
    Fp12 = Fp6[w] / (w^2 - v)          -> (d0, d1)

Nothing here is constant time.
"""

from gmpy2 import invert, mpz

# BN parameter; base field and group order are the standard BN polynomials in it.
BN_U = 4965661367192848881
P = mpz(36 * BN_U**4 + 36 * BN_U**3 + 24 * BN_U**2 + 6 * BN_U + 1)
R = mpz(36 * BN_U**4 + 36 * BN_U**3 + 18 * BN_U**2 + 6 * BN_U + 1)

assert P == 21888242871839275222246405745257275088696311157297823662689037894645226208583
assert R == 21888242871839275222246405745257275088548364400416034343698204186575808495617


def fp_inv(a):
    if a % P == 0:
        raise ZeroDivisionError("inverse of zero in Fp")
    return invert(a, P)


# -- Fp2 ---------------------------------------------------------------------

FP2_ZERO = (mpz(0), mpz(0))
FP2_ONE = (mpz(1), mpz(0))
XI = (mpz(9), mpz(1))


def fp2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def fp2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def fp2_neg(a):
    return (-a[0] % P, -a[1] % P)


def fp2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    return ((t0 - t1) % P, ((a0 + a1) * (b0 + b1) - t0 - t1) % P)


def fp2_sqr(a):
    a0, a1 = a
    return ((a0 + a1) * (a0 - a1) % P, 2 * a0 * a1 % P)


def fp2_scale(a, k):
    return (a[0] * k % P, a[1] * k % P)


def fp2_mul_xi(a):
    a0, a1 = a
    return ((9 * a0 - a1) % P, (a0 + 9 * a1) % P)


def fp2_conj(a):
    return (a[0], -a[1] % P)


def fp2_inv(a):
    a0, a1 = a
    norm = (a0 * a0 + a1 * a1) % P
    if norm == 0:
        raise ZeroDivisionError("inverse of zero in Fp2")
    t = invert(norm, P)
    return (a0 * t % P, -a1 * t % P)


def fp2_pow(a, e):
    result = FP2_ONE
    base = a
    while e:
        if e & 1:
            result = fp2_mul(result, base)
        base = fp2_sqr(base)
        e >>= 1
    return result


def fp2_is_zero(a):
    return a[0] == 0 and a[1] == 0


# -- Fp6 ---------------------------------------------------------------------

FP6_ZERO = (FP2_ZERO, FP2_ZERO, FP2_ZERO)
FP6_ONE = (FP2_ONE, FP2_ZERO, FP2_ZERO)


def fp6_add(a, b):
    return (fp2_add(a[0], b[0]), fp2_add(a[1], b[1]), fp2_add(a[2], b[2]))


def fp6_sub(a, b):
    return (fp2_sub(a[0], b[0]), fp2_sub(a[1], b[1]), fp2_sub(a[2], b[2]))


def fp6_neg(a):
    return (fp2_neg(a[0]), fp2_neg(a[1]), fp2_neg(a[2]))


def fp6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    t0 = fp2_mul(a0, b0)
    t1 = fp2_mul(a1, b1)
    t2 = fp2_mul(a2, b2)
    c0 = fp2_add(t0, fp2_mul_xi(fp2_sub(fp2_sub(fp2_mul(fp2_add(a1, a2), fp2_add(b1, b2)), t1), t2)))
    c1 = fp2_add(fp2_sub(fp2_sub(fp2_mul(fp2_add(a0, a1), fp2_add(b0, b1)), t0), t1), fp2_mul_xi(t2))
    c2 = fp2_add(fp2_sub(fp2_sub(fp2_mul(fp2_add(a0, a2), fp2_add(b0, b2)), t0), t2), t1)
    return (c0, c1, c2)


def fp6_mul_v(a):
    return (fp2_mul_xi(a[2]), a[0], a[1])


def fp6_mul_01(a, b0, b1):
    """Multiply by the sparse element (b0, b1, 0)."""
    a0, a1, a2 = a
    t0 = fp2_mul(a0, b0)
    t1 = fp2_mul(a1, b1)
    c0 = fp2_add(t0, fp2_mul_xi(fp2_mul(a2, b1)))
    c1 = fp2_sub(fp2_sub(fp2_mul(fp2_add(a0, a1), fp2_add(b0, b1)), t0), t1)
    c2 = fp2_add(fp2_mul(a2, b0), t1)
    return (c0, c1, c2)


def fp6_scale_fp(a, k):
    return (fp2_scale(a[0], k), fp2_scale(a[1], k), fp2_scale(a[2], k))


def fp6_inv(a):
    a0, a1, a2 = a
    A = fp2_sub(fp2_sqr(a0), fp2_mul_xi(fp2_mul(a1, a2)))
    B = fp2_sub(fp2_mul_xi(fp2_sqr(a2)), fp2_mul(a0, a1))
    C = fp2_sub(fp2_sqr(a1), fp2_mul(a0, a2))
    F = fp2_add(fp2_mul(a0, A), fp2_mul_xi(fp2_add(fp2_mul(a2, B), fp2_mul(a1, C))))
    Fi = fp2_inv(F)
    return (fp2_mul(A, Fi), fp2_mul(B, Fi), fp2_mul(C, Fi))


# -- Fp12 --------------------------------------------------------------------

FP12_ONE = (FP6_ONE, FP6_ZERO)


def fp12_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = fp6_mul(a0, b0)
    t1 = fp6_mul(a1, b1)
    c0 = fp6_add(t0, fp6_mul_v(t1))
    c1 = fp6_sub(fp6_sub(fp6_mul(fp6_add(a0, a1), fp6_add(b0, b1)), t0), t1)
    return (c0, c1)


def fp12_sqr(a):
    a0, a1 = a
    t = fp6_mul(a0, a1)
    c0 = fp6_sub(fp6_sub(fp6_mul(fp6_add(a0, a1), fp6_add(a0, fp6_mul_v(a1))), t), fp6_mul_v(t))
    return (c0, fp6_add(t, t))


def fp12_mul_line(f, y_p, b, c):
    """Multiply f by the sparse line value y_p + b*w + c*w^3.

    y_p is a base-field element; b and c live in Fp2.
    """
    f0, f1 = f
    t0 = fp6_scale_fp(f0, y_p)
    t1 = fp6_mul_01(f1, b, c)
    c0 = fp6_add(t0, fp6_mul_v(t1))
    s = fp6_mul_01(fp6_add(f0, f1), ((b[0] + y_p) % P, b[1]), c)
    c1 = fp6_sub(fp6_sub(s, t0), t1)
    return (c0, c1)


def fp12_conj(a):
    return (a[0], fp6_neg(a[1]))


def fp12_inv(a):
    a0, a1 = a
    t = fp6_inv(fp6_sub(fp6_mul(a0, a0), fp6_mul_v(fp6_mul(a1, a1))))
    return (fp6_mul(a0, t), fp6_neg(fp6_mul(a1, t)))


def fp12_eq(a, b):
    return a == b


def fp12_is_one(a):
    return a == FP12_ONE


# w^k basis coefficients pick up xi^(k(p-1)/6) under the p-power Frobenius.
_GAMMA = [fp2_pow(XI, k * (P - 1) // 6) for k in range(6)]


def fp12_frobenius(a):
    (c00, c01, c02), (c10, c11, c12) = a
    g = _GAMMA
    # basis: c00*1, c01*w^2, c02*w^4, c10*w, c11*w^3, c12*w^5
    return (
        (fp2_conj(c00), fp2_mul(fp2_conj(c01), g[2]), fp2_mul(fp2_conj(c02), g[4])),
        (fp2_mul(fp2_conj(c10), g[1]), fp2_mul(fp2_conj(c11), g[3]), fp2_mul(fp2_conj(c12), g[5])),
    )


def fp12_pow(a, e):
    if e < 0:
        a = fp12_inv(a)
        e = -e
    result = FP12_ONE
    base = a
    while e:
        if e & 1:
            result = fp12_mul(result, base)
        base = fp12_sqr(base)
        e >>= 1
    return result
