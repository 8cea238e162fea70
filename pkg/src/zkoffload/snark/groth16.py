"""Groth16 preprocessing SNARK: setup, witness computation, prove, verify.

Setup and blinding randomness are derived from caller-supplied seeds so test
runs are reproducible. Passing ``None`` draws from the OS instead. Seeded
setup is obviously not a trusted setup; anyone holding the seed can forge.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass

from gmpy2 import mpz

from ..algebra.curve import FixedBase, G1Point, G2Point, g1_add, g2_add, multi_scalar_combine, pippenger
from ..algebra.field import MODULUS, FieldElement
from ..algebra.pairing import pairing_product
from ..constraint.system import Assignment, ConstraintSystem, is_satisfied
from .qap import QapError, r1cs_to_qap, quotient_from_evaluations


class SnarkError(Exception):
    pass


class KeyMismatchError(SnarkError):
    """Key was generated for a different constraint system."""


class UnsatisfiedError(SnarkError):
    """The assignment does not satisfy the constraint system."""


class WitnessError(SnarkError):
    """Inputs violate the circuit; carries the first violated row."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


@dataclass(frozen=True)
class ProvingKey:
    alpha_g1: G1Point
    beta_g1: G1Point
    beta_g2: G2Point
    delta_g1: G1Point
    delta_g2: G2Point
    a_query: tuple  # G1, one per variable
    b_g1_query: tuple  # G1, one per variable
    b_g2_query: tuple  # G2, one per variable
    l_query: tuple  # G1, one per private variable
    h_query: tuple  # G1, tau^k t(tau) / delta for k < N - 1
    num_public: int
    cs_digest: bytes

    @property
    def num_variables(self) -> int:
        return len(self.a_query)


@dataclass(frozen=True)
class VerifyingKey:
    alpha_g1: G1Point
    beta_g2: G2Point
    gamma_g2: G2Point
    delta_g2: G2Point
    ic: tuple  # G1, constant term then one per public input
    cs_digest: bytes

    @property
    def num_public(self) -> int:
        return len(self.ic) - 1


@dataclass(frozen=True)
class Proof:
    a: G1Point
    b: G2Point
    c: G1Point


def _entropy() -> bytes:
    return secrets.token_bytes(32)


def _fixed_base_window(count: int) -> int:
    if count < 64:
        return 4
    if count < 2048:
        return 8
    return 11


def _batch_g1(base: G1Point, scalars) -> tuple:
    table = FixedBase(base.raw, g1_add, window=_fixed_base_window(len(scalars)))
    return tuple(G1Point(table.mul(int(s)) if s else None, check=False) for s in scalars)


def _batch_g2(base: G2Point, scalars) -> tuple:
    table = FixedBase(base.raw, g2_add, window=_fixed_base_window(len(scalars)))
    return tuple(G2Point(table.mul(int(s)) if s else None, check=False) for s in scalars)


def setup(cs: ConstraintSystem, seed: bytes | None = None) -> tuple[ProvingKey, VerifyingKey]:
    """Generate a key pair bound to `cs`. The trapdoor is dropped on return."""
    if not cs.finalized:
        raise SnarkError("constraint system must be finalized before setup")
    qap = r1cs_to_qap(cs)
    digest = cs.digest()
    seed = _entropy() if seed is None else bytes(seed)
    seed = seed + digest
    tau, alpha, beta, gamma, delta = (
        FieldElement.from_seed(seed, label) for label in (b"tau", b"alpha", b"beta", b"gamma", b"delta")
    )
    # tau must stay off the domain, otherwise t(tau) = 0
    while qap.target_at(tau.value) == 0:
        tau = FieldElement.from_seed(seed + tau.to_bytes(), b"tau")

    r = MODULUS
    u, v, w = qap.evaluate_at(tau.value)
    l = cs.num_public
    a_, b_ = alpha.value, beta.value
    mixed = [(b_ * u[i] + a_ * v[i] + w[i]) % r for i in range(qap.num_variables)]
    gamma_inv = gamma.inv().value
    delta_inv = delta.inv().value
    ic_scalars = [m * gamma_inv % r for m in mixed[: l + 1]]
    l_scalars = [m * delta_inv % r for m in mixed[l + 1 :]]

    n = qap.domain_size
    t_tau = qap.target_at(tau.value)
    h_scalars = []
    acc = mpz(t_tau * delta_inv % r)
    for _ in range(n - 1):
        h_scalars.append(acc)
        acc = acc * tau.value % r

    g1, g2 = G1Point.generator(), G2Point.generator()
    g1_scalars = [a_, b_, delta.value] + u + v + l_scalars + h_scalars + ic_scalars
    g1_points = _batch_g1(g1, g1_scalars)
    g2_points = _batch_g2(g2, [b_, gamma.value, delta.value] + v)

    m = qap.num_variables
    k = 3
    a_query = g1_points[k : k + m]
    k += m
    b_g1 = g1_points[k : k + m]
    k += m
    l_query = g1_points[k : k + len(l_scalars)]
    k += len(l_scalars)
    h_query = g1_points[k : k + len(h_scalars)]
    k += len(h_scalars)
    ic = g1_points[k:]

    pk = ProvingKey(
        alpha_g1=g1_points[0], beta_g1=g1_points[1], beta_g2=g2_points[0],
        delta_g1=g1_points[2], delta_g2=g2_points[2],
        a_query=a_query, b_g1_query=b_g1, b_g2_query=g2_points[3:],
        l_query=l_query, h_query=h_query, num_public=l, cs_digest=digest,
    )
    vk = VerifyingKey(
        alpha_g1=g1_points[0], beta_g2=g2_points[0], gamma_g2=g2_points[1],
        delta_g2=g2_points[2], ic=ic, cs_digest=digest,
    )
    return pk, vk


def compute_witness(circuit, public_inputs, private_inputs) -> Assignment:
    """Run `circuit.build_with_witness` and return a satisfying assignment.

    Raises WitnessError if the inputs do not satisfy the circuit. Shape
    problems surface as whatever the circuit raises (a ValueError subclass).
    """
    cs = circuit.build_with_witness(public_inputs, private_inputs)
    z = cs.assignment()
    row = cs.first_violation(z)
    if row is not None:
        raise WitnessError(f"constraint {row} is violated", row)
    return z


def prove(pk: ProvingKey, cs: ConstraintSystem, z: Assignment, blinding_seed: bytes | None = None) -> Proof:
    if pk.cs_digest != cs.digest():
        raise KeyMismatchError("proving key does not belong to this constraint system")
    if len(z) != pk.num_variables:
        raise KeyMismatchError("assignment length does not match the proving key")
    if not is_satisfied(cs, z):
        raise UnsatisfiedError("refusing to prove an unsatisfied assignment")
    qap = r1cs_to_qap(cs)
    try:
        h = quotient_from_evaluations(*qap.combined_evaluations(z))
    except QapError as exc:  # pragma: no cover - implied by is_satisfied
        raise UnsatisfiedError(str(exc)) from exc

    seed = _entropy() if blinding_seed is None else bytes(blinding_seed)
    seed = seed + pk.cs_digest
    r = FieldElement.from_seed(seed, b"blind-r").value
    s = FieldElement.from_seed(seed, b"blind-s").value

    vals = z.values
    raw = lambda pts: [p.raw for p in pts]  # noqa: E731
    a_acc = pippenger(raw(pk.a_query), vals, g1_add)
    b1_acc = pippenger(raw(pk.b_g1_query), vals, g1_add)
    b2_acc = pippenger(raw(pk.b_g2_query), vals, g2_add)
    priv = vals[pk.num_public + 1 :]
    c_acc = g1_add(pippenger(raw(pk.l_query), priv, g1_add), pippenger(raw(pk.h_query), h, g1_add))

    A = pk.alpha_g1 + G1Point(a_acc, check=False) + pk.delta_g1 * r
    B2 = pk.beta_g2 + G2Point(b2_acc, check=False) + pk.delta_g2 * s
    B1 = pk.beta_g1 + G1Point(b1_acc, check=False) + pk.delta_g1 * s
    C = G1Point(c_acc, check=False) + A * s + B1 * r - pk.delta_g1 * (r * s % MODULUS)
    return Proof(A, B2, C)


def _point_ok(pt) -> bool:
    return not pt.is_identity() and pt._on_curve(pt.raw) and pt.in_subgroup()


def verify(vk: VerifyingKey, public_inputs, proof: Proof) -> bool:
    """Pairing check; raises ValueError on arity mismatch, otherwise a verdict."""
    inputs = list(public_inputs)
    if len(inputs) != vk.num_public:
        raise ValueError(f"expected {vk.num_public} public inputs, got {len(inputs)}")
    if not (isinstance(proof.a, G1Point) and isinstance(proof.b, G2Point) and isinstance(proof.c, G1Point)):
        return False
    if not all(_point_ok(p) for p in (proof.a, proof.b, proof.c)):
        return False
    scalars = [1] + [int(x) for x in inputs]
    if any(not 0 <= x < MODULUS for x in scalars):
        return False
    acc = multi_scalar_combine(list(vk.ic), scalars)
    check = pairing_product([
        (-proof.a, proof.b),
        (vk.alpha_g1, vk.beta_g2),
        (acc, vk.gamma_g2),
        (proof.c, vk.delta_g2),
    ])
    return check.is_identity()
