"""Field, curve groups and pairing."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zkoffload.algebra import (
    MODULUS,
    FieldElement,
    G1Point,
    G2Point,
    TargetElement,
    multi_scalar_combine,
    pairing,
    pairing_product,
    scalar_mul,
)

# [k]G from an independent BN254 implementation (py_ecc 8.0.0, optimized_bn128)
G1_MULTIPLES = {
    0x1: (0x1, 0x2),
    0x2: (0x30644e72e131a029b85045b68181585d97816a916871ca8d3c208c16d87cfd3,
          0x15ed738c0e0a7c92e7845f96b2ae9c0a68a6a449e3538fc7ff3ebf7a5a18a2c4),
    0x3: (0x769bf9ac56bea3ff40232bcb1b6bd159315d84715b8e679f2d355961915abf0,
          0x2ab799bee0489429554fdb7c8d086475319e63b40b9c5b57cdf1ff3dd9fe2261),
    0x7: (0x17072b2ed3bb8d759a5325f477629386cb6fc6ecb801bd76983a6b86abffe078,
          0x168ada6cd130dd52017bb54bfa19377aadfe3bf05d18f41b77809f7f60d4af9e),
    0xff: (0x1be8638aaadb811f5e0a92508b38ad4fbcb1f35a85e87f141daa9abc56252957,
           0x25b963af77b36991bcc91857d92b1eb3d78c3d8f416008412039d27775bbf42b),
    0x1000000000000000d: (0x260033004e8d1f1d9e6168e92397f5950476baa08cf52a1a128add52e3b348f0,
                          0x132f8c345c4bb6fd08ae0e2e0ea39ae0aefe7cecb95c6fd4616d65a74c3bd476),
    0x30644e72e131a029b85045b68181585d2833e84879b9709143e1f593f0000000: (
        0x1, 0x30644e72e131a029b85045b68181585d97816a916871ca8d3c208c16d87cfd45),
    0x1234567890abcdef1234567890abcdef1234567890abcdef1234567890abcd: (
        0x2cf66ea18e4338756b39a85182e7347a797075c895f8faa96ec0758994f28b9,
        0x871da4347ad34eb2a8f47fe6194e1f84ff7fa0138c718e6ed0a94d40b789aef),
}

G2_MULTIPLES = {
    0x1: ((0x1800deef121f1e76426a00665e5c4479674322d4f75edadd46debd5cd992f6ed,
           0x198e9393920d483a7260bfb731fb5d25f1aa493335a9e71297e485b7aef312c2),
          (0x12c85ea5db8c6deb4aab71808dcb408fe3d1e7690c43d37b4ce6cc0166fa7daa,
           0x90689d0585ff075ec9e99ad690c3395bc4b313370b38ef355acdadcd122975b)),
    0x2: ((0x27dc7234fd11d3e8c36c59277c3e6f149d5cd3cfa9a62aee49f8130962b4b3b9,
           0x203e205db4f19b37b60121b83a7333706db86431c6d835849957ed8c3928ad79),
          (0x4bb53b8977e5f92a0bc372742c4830944a59b4fe6b1c0466e2a6dad122b5d2e,
           0x195e8aa5b7827463722b8c153931579d3505566b4edf48d498e185f0509de152)),
    0x3: ((0x6064e784db10e9051e52826e192715e8d7e478cb09a5e0012defa0694fbc7f5,
           0x1014772f57bb9742735191cd5dcfe4ebbc04156b6878a0a7c9824f32ffb66e85),
          (0x58e1d5681b5b9e0074b0f9c8d2c68a069b920d74521e79765036d57666c5597,
           0x21e2335f3354bb7922ffcc2f38d3323dd9453ac49b55441452aeaca147711b2)),
    0x7: ((0x224bdc5d4327fcf8ed702e01de1c2f1657a253ba75e32a89c390142aaa28b308,
           0x2903ba015a9abde26a5d081e84551e63be0fd4516e46ee6d593edeba46362455),
          (0x1d92fff52a265017eeccb372e37d7a7bd431800eca28dfd82e21e8054114233f,
           0x3c8b7cda6b2dedb7aeeaf5fda464ad17036bea1c4e6f7adbaed1ebe0335e0d8)),
    0x1000000000000000d: (
        (0x2d981aa8b2742c04e113a1f6a0e0d3fca12d2968670117fd751fb5af7e5cb65f,
         0x20546dff78c37e3de269ea31c35540bac2fc685d845d8f5cbe4b221df5f9a655),
        (0x1f3720565de822cbb2762a614dbcf7cf39d633b974d1cf423fde6964a811b05f,
         0x34a6a488188f9c9263f52b11c8ea44a33f50b1261c397004ae4289f4d01ead0)),
    0x30644e72e131a029b85045b68181585d2833e84879b9709143e1f593f0000000: (
        (0x1800deef121f1e76426a00665e5c4479674322d4f75edadd46debd5cd992f6ed,
         0x198e9393920d483a7260bfb731fb5d25f1aa493335a9e71297e485b7aef312c2),
        (0x1d9befcd05a5323e6da4d435f3b617cdb3af83285c2df711ef39c01571827f9d,
         0x275dc4a288d1afb3cbb1ac09187524c7db36395df7be3b99e673b13a075a65ec)),
    0x1234567890abcdef1234567890abcdef1234567890abcdef1234567890abcd: (
        (0x302d0d39378da107639d1ecc9b1d56c161f5e9874ab9cd361a2b506a32fef4e0,
         0x1e56e51bb226bd9cf347525d18487d71c503bd5edcb379fe8ff4436102e90466),
        (0x4681aa6fa0922d1bb7f7f891105138b2031be52639bfd4b39d94beced78e528,
         0x6aeff6a541493587d7ccb5833a514f62ae835114f943757ef6fa433b910c93b)),
}

R = MODULUS
G1 = G1Point.generator()
G2 = G2Point.generator()
elements = st.integers(min_value=0, max_value=R - 1).map(FieldElement)
scalars = st.integers(min_value=0, max_value=R - 1)


# -- field ------------------------------------------------------------------

def test_field_examples():
    x = FieldElement(123456789)
    assert FieldElement(0) + x == x
    assert x * x.inv() == FieldElement.one()
    assert x ** (R - 1) == FieldElement.one()
    assert FieldElement(-1).value == R - 1
    assert FieldElement(R + 5).value == 5


def test_inverse_of_zero_is_an_error():
    with pytest.raises(ZeroDivisionError):
        FieldElement(0).inv()


@settings(max_examples=1000, deadline=None)
@given(elements, elements, elements)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == FieldElement.zero()
    assert (a - b) + b == a
    assert 0 <= (a * b).value < R and 0 <= (a - b).value < R
    if a.value:
        assert a * a.inv() == FieldElement.one()
        assert (b / a) * a == b


@settings(max_examples=200, deadline=None)
@given(elements)
def test_field_bytes_roundtrip(a):
    assert FieldElement.from_bytes(a.to_bytes()) == a


def test_from_bytes_rejects_non_canonical():
    with pytest.raises(ValueError):
        FieldElement.from_bytes(R.to_bytes(32, "little"))


def test_from_seed_is_deterministic_and_label_separated():
    a = FieldElement.from_seed(b"seed", b"tau")
    assert a == FieldElement.from_seed(b"seed", b"tau")
    assert a != FieldElement.from_seed(b"seed", b"alpha")
    assert a != FieldElement.from_seed(b"seed2", b"tau")


# -- curves -----------------------------------------------------------------

@pytest.mark.parametrize("k", sorted(G1_MULTIPLES))
def test_g1_multiples_match_reference(k):
    assert (G1 * k).xy() == G1_MULTIPLES[k]


@pytest.mark.parametrize("k", sorted(G2_MULTIPLES))
def test_g2_multiples_match_reference(k):
    assert (G2 * k).xy() == G2_MULTIPLES[k]


@pytest.mark.parametrize("G", [G1, G2], ids=["G1", "G2"])
def test_scalar_mul_examples(G):
    ident = type(G).identity()
    assert scalar_mul(G, 0) == ident
    assert scalar_mul(G, 1) == G
    assert scalar_mul(G, 2) == G + G
    assert scalar_mul(G, R) == ident
    assert G + ident == G and ident + G == G
    assert G + (-G) == ident
    assert G.in_subgroup()


@settings(max_examples=60, deadline=None)
@given(scalars, scalars)
def test_scalar_mul_is_additive_g1(k1, k2):
    assert G1 * ((k1 + k2) % R) == (G1 * k1) + (G1 * k2)


@settings(max_examples=25, deadline=None)
@given(scalars, scalars)
def test_scalar_mul_is_additive_g2(k1, k2):
    assert G2 * ((k1 + k2) % R) == (G2 * k1) + (G2 * k2)


@settings(max_examples=40, deadline=None)
@given(scalars, scalars, scalars)
def test_group_law_g1(a, b, c):
    P, Q, S = G1 * a, G1 * b, G1 * c
    assert (P + Q) + S == P + (Q + S)
    assert P + Q == Q + P
    assert P - P == G1Point.identity()
    for pt in (P + Q, P + P):
        assert pt.is_identity() or G1Point.from_xy(*pt.xy()) == pt


@settings(max_examples=15, deadline=None)
@given(scalars, scalars, scalars)
def test_group_law_g2(a, b, c):
    P, Q, S = G2 * a, G2 * b, G2 * c
    assert (P + Q) + S == P + (Q + S)
    assert P + Q == Q + P
    assert P - P == G2Point.identity()
    if not (P + Q).is_identity():
        assert G2Point.from_xy(*(P + Q).xy()) == P + Q


def test_off_curve_points_rejected():
    with pytest.raises(ValueError):
        G1Point.from_xy(1, 3)
    (x0, x1), (y0, y1) = G2.xy()
    with pytest.raises(ValueError):
        G2Point.from_xy((x0, x1), (y0 + 1, y1))


def _fp2_sqrt(a):
    """Square root in Fp2 for p = 3 mod 4, or None."""
    from zkoffload.algebra.tower import P, fp2_mul, fp2_pow

    a1 = fp2_pow(a, (P - 3) // 4)
    alpha = fp2_mul(fp2_mul(a1, a1), a)
    x0 = fp2_mul(a1, a)
    if alpha == (P - 1, 0):
        root = (-x0[1] % P, x0[0])
    else:
        root = fp2_mul(fp2_pow(((1 + alpha[0]) % P, alpha[1]), (P - 1) // 2), x0)
    return root if fp2_mul(root, root) == (a[0] % P, a[1] % P) else None


def test_twist_point_outside_g2_is_detected():
    from zkoffload.algebra.curve import B2
    from zkoffload.algebra.tower import fp2_add, fp2_mul

    for x0 in range(1, 100):
        x = (x0, 0)
        y = _fp2_sqrt(fp2_add(fp2_mul(fp2_mul(x, x), x), B2))
        if y is not None:
            pt = G2Point.from_xy(x, (int(y[0]), int(y[1])))
            assert not pt.in_subgroup()
            assert G2.in_subgroup()
            return
    pytest.fail("no twist point with small x found")


def test_msm_examples():
    assert multi_scalar_combine([], []) == G1Point.identity()
    assert multi_scalar_combine([G1], [5]) == G1 * 5
    assert multi_scalar_combine([G1 * 3, G1 * 11], [7, 9]) == G1 * 3 * 7 + G1 * 11 * 9
    with pytest.raises(ValueError):
        multi_scalar_combine([G1], [1, 2])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(scalars, scalars), min_size=1, max_size=40))
def test_msm_matches_naive_loop(pairs):
    points = [G1 * p for p, _ in pairs]
    ks = [k for _, k in pairs]
    naive = G1Point.identity()
    for pt, k in zip(points, ks):
        naive = naive + pt * k
    assert multi_scalar_combine(points, ks) == naive


def test_msm_g2_matches_naive_loop():
    rng = random.Random(4)
    points = [G2 * rng.randrange(R) for _ in range(12)]
    ks = [rng.randrange(R) for _ in range(12)]
    naive = G2Point.identity()
    for pt, k in zip(points, ks):
        naive = naive + pt * k
    assert multi_scalar_combine(points, ks) == naive


# -- pairing ----------------------------------------------------------------

@pytest.fixture(scope="module")
def e_gen():
    return pairing(G1, G2)


def test_pairing_examples(e_gen):
    assert pairing(G1Point.identity(), G2).is_identity()
    assert pairing(G1, G2Point.identity()).is_identity()
    assert not e_gen.is_identity()
    assert e_gen ** R == TargetElement.identity()
    assert pairing(G1 * 6, G2) == pairing(G1, G2 * 6)


def test_bilinearity_100_pairs(e_gen):
    rng = random.Random(2024)
    for _ in range(100):
        a, b = rng.randrange(1, R), rng.randrange(1, R)
        assert pairing(G1 * a, G2 * b) == e_gen ** (a * b % R)


def test_bilinearity_symmetry():
    rng = random.Random(7)
    for _ in range(5):
        a = rng.randrange(1, R)
        assert pairing(G1 * a, G2) == pairing(G1, G2 * a)


def test_pairing_product_matches_separate_pairings(e_gen):
    a, b, c = 5, 11, 55
    assert pairing_product([(G1 * a, G2 * b), (-(G1 * c), G2)]).is_identity()
    prod = pairing_product([(G1 * 2, G2), (G1, G2 * 3)])
    assert prod == pairing(G1 * 2, G2) * pairing(G1, G2 * 3) == e_gen ** 5
    assert (e_gen ** 5).inverse() * e_gen ** 5 == TargetElement.identity()
