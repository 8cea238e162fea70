"""Gadget library: reusable constraint fragments.

Every gadget works in both build modes. In witness mode it also computes the
values of the variables it allocates; those values are best-effort, so an
input that violates the gadget yields an assignment that fails
``is_satisfied`` instead of an exception.
"""

from __future__ import annotations

from ..algebra.field import MODULUS
from . import mimc
from .system import (
    ONE,
    PRIVATE,
    ConstraintError,
    ConstraintSystem,
    LinearCombination,
    Variable,
)


def _val(cs: ConstraintSystem, x) -> int | None:
    return cs.value(x)


def _is(v, target) -> int | None:
    return None if v is None else int(v == target)


def gadget_boolean(cs: ConstraintSystem, x) -> None:
    """x * (x - 1) = 0."""
    cs.enforce(x, LinearCombination.of(x) - 1, 0)


def gadget_equal(cs: ConstraintSystem, x, y) -> None:
    """(x - y) * 1 = 0."""
    cs.enforce(LinearCombination.of(x) - y, ONE, 0)


def multiply(cs: ConstraintSystem, a, b) -> Variable:
    va, vb = _val(cs, a), _val(cs, b)
    out = cs.alloc(PRIVATE, None if va is None else va * vb % MODULUS)
    cs.enforce(a, b, out)
    return out


def lookup_lc(table, selectors) -> LinearCombination:
    """sum_i table[i] * selector_i, as a linear combination (no constraints)."""
    if len(table) != len(selectors):
        raise ConstraintError(f"table has {len(table)} entries but {len(selectors)} selectors")
    terms = {}
    for t, s in zip(table, selectors):
        t %= MODULUS
        if t:
            terms[int(s)] = (terms.get(int(s), 0) + t) % MODULUS
    return LinearCombination(terms)


def gadget_selector_set(cs: ConstraintSystem, selectors) -> None:
    """Each selector is boolean and exactly one of them is set."""
    total = LinearCombination()
    for s in selectors:
        gadget_boolean(cs, s)
        total = total + s
    gadget_equal(cs, total, 1)


def gadget_indexed_lookup(cs: ConstraintSystem, table, index_selectors) -> Variable:
    """Variable equal to table[k] where selector k is the single one set."""
    if len(table) != len(index_selectors):
        raise ConstraintError(f"table has {len(table)} entries but {len(index_selectors)} selectors")
    gadget_selector_set(cs, index_selectors)
    picked = lookup_lc(table, index_selectors)
    out = cs.alloc(PRIVATE, _val(cs, picked))
    gadget_equal(cs, out, picked)
    return out


def gadget_one_hot(cs: ConstraintSystem, x, size: int) -> list[Variable]:
    """Selectors s_0..s_{size-1} with sum s_j = 1 and sum j*s_j = x."""
    vx = _val(cs, x)
    selectors = [cs.alloc(PRIVATE, _is(vx, j)) for j in range(size)]
    gadget_selector_set(cs, selectors)
    gadget_equal(cs, lookup_lc(range(size), selectors), x)
    return selectors


def gadget_bits(cs: ConstraintSystem, x, width: int) -> list[Variable]:
    """Little-endian bit decomposition of x into `width` booleans."""
    vx = _val(cs, x)
    bits = [cs.alloc(PRIVATE, None if vx is None else (vx >> k) & 1) for k in range(width)]
    for b in bits:
        gadget_boolean(cs, b)
    gadget_equal(cs, lookup_lc([1 << k for k in range(width)], bits), x)
    return bits


def gadget_range_check(cs: ConstraintSystem, x, bound: int) -> None:
    """0 <= x <= bound: x and bound - x both fit in bit_length(bound) bits."""
    if bound < 0:
        raise ConstraintError("range bound must be non-negative")
    width = max(1, int(bound).bit_length())
    gadget_bits(cs, x, width)
    gadget_bits(cs, LinearCombination.constant(bound) - x, width)


def gadget_permutation_check(cs: ConstraintSystem, path_vars, city_vars) -> list[list[Variable]]:
    """Multiset {path} == multiset {cities} via a permutation selector matrix.

    sel[i][j] = 1 means path slot i takes city slot j. Rows and columns each
    sum to one and a set selector forces path_i == city_j. Padding zeros in
    both lists pair off like any other value.
    """
    if len(path_vars) != len(city_vars):
        raise ConstraintError("path and city lists differ in length")
    n = len(path_vars)
    chosen = None
    if cs.has_witness:
        pv = [_val(cs, p) for p in path_vars]
        cv = [_val(cs, c) for c in city_vars]
        chosen = [None] * n
        used = [False] * n
        for i in range(n):
            for j in range(n):
                if not used[j] and cv[j] == pv[i]:
                    chosen[i] = j
                    used[j] = True
                    break
    sel = []
    for i in range(n):
        row = [cs.alloc(PRIVATE, None if chosen is None else int(chosen[i] == j)) for j in range(n)]
        sel.append(row)
    for i in range(n):
        gadget_selector_set(cs, sel[i])
        for j in range(n):
            # sel_ij * (path_i - city_j) = 0
            cs.enforce(sel[i][j], LinearCombination.of(path_vars[i]) - city_vars[j], 0)
    for j in range(n):
        gadget_equal(cs, sum((sel[i][j].lc() for i in range(n)), LinearCombination()), 1)
    return sel


def gadget_path_sum(cs: ConstraintSystem, path_vars, distance_table, out_sum,
                    slot_selectors=None) -> None:
    """out_sum = length of the closed tour through the non-sentinel path prefix.

    distance_table is (n+1) x (n+1) over city ids 0..n where id 0 is the
    padding sentinel; its row and column are ignored (edges touching a
    sentinel contribute 0). Sentinels must form a suffix of the path. Each
    slot is decoded into one-hot selectors (reusable via slot_selectors);
    every edge is then a two-level indexed lookup: the next slot's selectors
    pick a column of each row, the current slot's selectors pick the row.
    """
    size = len(distance_table)
    T = len(path_vars)
    if T == 0:
        raise ConstraintError("empty path")
    if any(len(row) != size for row in distance_table):
        raise ConstraintError("distance table must be square")
    table = [[0 if (u == 0 or v == 0) else int(distance_table[u][v]) for v in range(size)]
             for u in range(size)]
    if slot_selectors is None:
        slot_selectors = [gadget_one_hot(cs, p, size) for p in path_vars]

    # is_real_i = 1 - sel_i[0]; sentinel suffix: sel_i[0] * (1 - sel_{i+1}[0]) = 0
    for i in range(T - 1):
        cs.enforce(slot_selectors[i][0], LinearCombination.constant(1) - slot_selectors[i + 1][0], 0)

    total = LinearCombination()
    for i in range(T - 1):
        cur, nxt = slot_selectors[i], slot_selectors[i + 1]
        for u in range(1, size):
            row_value = lookup_lc(table[u], nxt)
            if not row_value.terms:
                continue
            total = total + multiply(cs, cur[u], row_value)

    # closing edge: last real city back to path[0]
    last_flags = []
    for i in range(T):
        real_i = LinearCombination.constant(1) - slot_selectors[i][0]
        if i + 1 < T:
            last_flags.append(real_i - (LinearCombination.constant(1) - slot_selectors[i + 1][0]))
        else:
            last_flags.append(real_i)
    last_city = LinearCombination()
    for flag, p in zip(last_flags, path_vars):
        last_city = last_city + multiply(cs, flag, p)
    last_sel = gadget_one_hot(cs, last_city, size)
    first = slot_selectors[0]
    for u in range(1, size):
        row_value = lookup_lc(table[u], first)
        if row_value.terms:
            total = total + multiply(cs, last_sel[u], row_value)

    gadget_equal(cs, total, out_sum)


def _mimc_permutation(cs: ConstraintSystem, left, right):
    # values are tracked alongside the variables to keep witness builds cheap
    left, right = LinearCombination.of(left), LinearCombination.of(right)
    witness = cs.has_witness
    vl = cs.value(left) if witness else None
    vr = cs.value(right) if witness else None
    last = mimc.ROUNDS - 1
    for i, c in enumerate(mimc.ROUND_CONSTANTS):
        k = (mimc.KEY + c) % MODULUS
        t = left + k
        if witness:
            vt = (vl + k) % MODULUS
            vt2 = vt * vt % MODULUS
            vnew = (vr + vt2 * vt) % MODULUS
        else:
            vt2 = vnew = None
        t2 = cs.alloc(PRIVATE, vt2)
        cs.enforce(t, t, t2)
        new = cs.alloc(PRIVATE, vnew)
        cs.enforce(t2, t, new.lc() - right)
        if i < last:
            left, right = new.lc(), left
            vl, vr = vnew, vl
        else:
            right = new.lc()
    return left, right


def gadget_hash(cs: ConstraintSystem, inputs) -> tuple[Variable, Variable]:
    """Digest limbs of the MiMC-Feistel sponge over `inputs`."""
    inputs = list(inputs)
    if not inputs:
        raise ConstraintError("cannot hash an empty input list")
    left = LinearCombination()
    right = LinearCombination()
    for x in inputs:
        left, right = _mimc_permutation(cs, LinearCombination.of(left) + x, right)
    out0 = cs.alloc(PRIVATE, _val(cs, left))
    gadget_equal(cs, out0, left)
    left, right = _mimc_permutation(cs, left, right)
    out1 = cs.alloc(PRIVATE, _val(cs, left))
    gadget_equal(cs, out1, left)
    return out0, out1
