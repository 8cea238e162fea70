"""Radix-2 NTT over the scalar field and evaluation-domain helpers."""

from __future__ import annotations

from gmpy2 import invert, mpz

from ..algebra.field import MODULUS, MULTIPLICATIVE_GENERATOR, root_of_unity

_R = mpz(MODULUS)
COSET_SHIFT = MULTIPLICATIVE_GENERATOR


def _bit_reverse(a: list) -> None:
    n = len(a)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]


def _ntt(values, omega: int) -> list:
    a = [mpz(v) for v in values]
    n = len(a)
    if n & (n - 1):
        raise ValueError("NTT length must be a power of two")
    _bit_reverse(a)
    r = _R
    size = 2
    while size <= n:
        half = size >> 1
        w_m = pow(mpz(omega), n // size, r)
        twiddles = [mpz(1)] * half
        for k in range(1, half):
            twiddles[k] = twiddles[k - 1] * w_m % r
        for start in range(0, n, size):
            for k in range(half):
                i = start + k
                j = i + half
                t = a[j] * twiddles[k] % r
                u = a[i]
                a[i] = (u + t) % r
                a[j] = (u - t) % r
        size <<= 1
    return a


def fft(coeffs, n: int | None = None) -> list:
    """Evaluations of the polynomial at omega^0..omega^{n-1}."""
    coeffs = list(coeffs)
    n = n or len(coeffs)
    if len(coeffs) > n:
        raise ValueError("polynomial degree exceeds domain")
    coeffs += [0] * (n - len(coeffs))
    return _ntt(coeffs, root_of_unity(n))


def ifft(evals) -> list:
    n = len(evals)
    omega_inv = invert(mpz(root_of_unity(n)), _R)
    out = _ntt(evals, omega_inv)
    n_inv = invert(mpz(n), _R)
    return [v * n_inv % _R for v in out]


def coset_fft(coeffs, n: int, shift: int = COSET_SHIFT) -> list:
    coeffs = list(coeffs) + [0] * (n - len(coeffs))
    g = mpz(shift)
    acc = mpz(1)
    scaled = []
    for c in coeffs:
        scaled.append(c * acc % _R)
        acc = acc * g % _R
    return fft(scaled, n)


def coset_ifft(evals, shift: int = COSET_SHIFT) -> list:
    coeffs = ifft(evals)
    g_inv = invert(mpz(shift), _R)
    acc = mpz(1)
    for i in range(len(coeffs)):
        coeffs[i] = coeffs[i] * acc % _R
        acc = acc * g_inv % _R
    return coeffs


def poly_eval(coeffs, x: int) -> int:
    acc = mpz(0)
    x = mpz(x)
    for c in reversed(coeffs):
        acc = (acc * x + c) % _R
    return int(acc)


def poly_mul(a, b) -> list:
    """Schoolbook product; fine for the small polynomials tests use."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % MODULUS
    return out


def poly_divmod(num, den) -> tuple[list, list]:
    num = [int(c) % MODULUS for c in num]
    den = [int(c) % MODULUS for c in den]
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = pow(den[-1], -1, MODULUS)
    quot = [0] * max(len(num) - len(den) + 1, 0)
    rem = list(num)
    for k in range(len(quot) - 1, -1, -1):
        coef = rem[k + len(den) - 1] * lead_inv % MODULUS
        quot[k] = coef
        if coef:
            for j, d in enumerate(den):
                rem[k + j] = (rem[k + j] - coef * d) % MODULUS
    rem = rem[: len(den) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


def batch_inverse(values) -> list:
    """Montgomery's trick; every value must be non-zero."""
    values = [mpz(v) for v in values]
    prefix = []
    acc = mpz(1)
    for v in values:
        prefix.append(acc)
        acc = acc * v % _R
    inv = invert(acc, _R)
    out = [mpz(0)] * len(values)
    for i in range(len(values) - 1, -1, -1):
        out[i] = prefix[i] * inv % _R
        inv = inv * values[i] % _R
    return out
