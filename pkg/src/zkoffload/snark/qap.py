"""R1CS -> QAP reduction over a power-of-two evaluation domain.

Row j of the constraint system becomes the domain point omega^j. One extra
row ``x_i * 0 = 0`` is appended per public input so that the public
polynomials are linearly independent. The per-variable polynomials are kept
in sparse evaluation form; coefficient vectors are materialized on request.
"""

from __future__ import annotations

from gmpy2 import mpz

from ..algebra.field import MODULUS, root_of_unity
from ..constraint.system import Assignment, ConstraintSystem
from . import poly


class QapError(ValueError):
    pass


class QapInstance:
    def __init__(self, rows_a, rows_b, rows_c, num_variables: int, num_public: int):
        self.rows_a = rows_a
        self.rows_b = rows_b
        self.rows_c = rows_c
        self.num_variables = num_variables
        self.num_public = num_public
        m = len(rows_a)
        self.domain_size = 1 << (m - 1).bit_length() if m > 1 else 1
        self.omega = root_of_unity(self.domain_size)

    @property
    def num_rows(self) -> int:
        return len(self.rows_a)

    def domain(self) -> list[int]:
        out, acc = [], 1
        for _ in range(self.domain_size):
            out.append(acc)
            acc = acc * self.omega % MODULUS
        return out

    def target_at(self, x: int) -> int:
        """t(x) = x^N - 1, vanishing on the whole domain."""
        return (pow(int(x), self.domain_size, MODULUS) - 1) % MODULUS

    def target_poly(self) -> list[int]:
        return [MODULUS - 1] + [0] * (self.domain_size - 1) + [1]

    def column_evaluations(self, i: int) -> tuple[list[int], list[int], list[int]]:
        out = []
        for rows in (self.rows_a, self.rows_b, self.rows_c):
            ev = [0] * self.domain_size
            for j, row in enumerate(rows):
                ev[j] = row.get(i, 0)
            out.append(ev)
        return tuple(out)

    def polynomials(self, i: int) -> tuple[list[int], list[int], list[int]]:
        """Coefficient vectors (A_i, B_i, C_i) of variable i."""
        return tuple([int(c) for c in poly.ifft(ev)] for ev in self.column_evaluations(i))

    def lagrange_at(self, x: int) -> list[int]:
        """L_j(x) for every domain point j."""
        n = self.domain_size
        x = int(x) % MODULUS
        dom = self.domain()
        if x in dom:
            return [int(d == x) for d in dom]
        tx = self.target_at(x)
        n_inv = pow(n, -1, MODULUS)
        inv = poly.batch_inverse([(x - d) % MODULUS for d in dom])
        scale = tx * n_inv % MODULUS
        return [int(scale * d % MODULUS * v % MODULUS) for d, v in zip(dom, inv)]

    def evaluate_at(self, x: int) -> tuple[list[int], list[int], list[int]]:
        """(u_i(x), v_i(x), w_i(x)) for every variable i."""
        lag = self.lagrange_at(x)
        out = []
        for rows in (self.rows_a, self.rows_b, self.rows_c):
            acc = [mpz(0)] * self.num_variables
            for j, row in enumerate(rows):
                lj = lag[j]
                if not lj:
                    continue
                for i, c in row.items():
                    acc[i] += c * lj
            out.append([int(v % MODULUS) for v in acc])
        return tuple(out)

    def combined_evaluations(self, z) -> tuple[list, list, list]:
        """Evaluations of sum z_i A_i (and B, C) over the domain."""
        vals = z.values if isinstance(z, Assignment) else [int(v) % MODULUS for v in z]
        if len(vals) != self.num_variables:
            raise QapError(f"assignment has {len(vals)} entries, expected {self.num_variables}")
        out = []
        for rows in (self.rows_a, self.rows_b, self.rows_c):
            ev = [0] * self.domain_size
            for j, row in enumerate(rows):
                s = 0
                for i, c in row.items():
                    s += c * vals[i]
                ev[j] = s % MODULUS
            out.append(ev)
        return tuple(out)

    def quotient(self, z) -> list[int]:
        """h with a*b - c = h*t; raises QapError if t does not divide."""
        a_ev, b_ev, c_ev = self.combined_evaluations(z)
        return quotient_from_evaluations(a_ev, b_ev, c_ev)

    def divisibility_holds(self, z) -> bool:
        try:
            self.quotient(z)
        except QapError:
            return False
        return True


def quotient_from_evaluations(a_ev, b_ev, c_ev) -> list[int]:
    n = len(a_ev)
    for a, b, c in zip(a_ev, b_ev, c_ev):
        if (a * b - c) % MODULUS:
            raise QapError("a*b - c does not vanish on the domain")
    a_co = poly.ifft(a_ev)
    b_co = poly.ifft(b_ev)
    c_co = poly.ifft(c_ev)
    a_cs = poly.coset_fft(a_co, n)
    b_cs = poly.coset_fft(b_co, n)
    c_cs = poly.coset_fft(c_co, n)
    t_inv = pow((pow(poly.COSET_SHIFT, n, MODULUS) - 1) % MODULUS, -1, MODULUS)
    r = mpz(MODULUS)
    h_cs = [(a * b - c) * t_inv % r for a, b, c in zip(a_cs, b_cs, c_cs)]
    h = poly.coset_ifft(h_cs)
    if h[-1] % MODULUS:
        raise QapError("quotient degree too large")
    return [int(v) for v in h[:-1]]


def r1cs_to_qap(cs: ConstraintSystem) -> QapInstance:
    if not cs.constraints:
        raise QapError("cannot reduce an empty constraint system")
    rows_a, rows_b, rows_c = [], [], []
    for a, b, c in cs.constraints:
        rows_a.append(a.terms)
        rows_b.append(b.terms)
        rows_c.append(c.terms)
    for i in range(1, cs.num_public + 1):
        rows_a.append({i: 1})
        rows_b.append({})
        rows_c.append({})
    return QapInstance(rows_a, rows_b, rows_c, cs.num_variables, cs.num_public)
