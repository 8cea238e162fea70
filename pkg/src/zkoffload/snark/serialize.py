"""Byte and JSON encodings for keys and proofs.

Every blob is a short magic tag followed by sections. A section is a u32
little-endian element count and then that many 32-byte little-endian
integers. Curve points use two elements in G1 and four in G2 (x.c0, x.c1,
y.c0, y.c1); the identity is written as all zeros.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

from gmpy2 import mpz

from ..algebra.curve import G1Point, G2Point
from ..algebra.tower import P
from .groth16 import Proof, ProvingKey, VerifyingKey

PK_MAGIC = b"ZKOPK1"
VK_MAGIC = b"ZKOVK1"
PROOF_MAGIC = b"ZKOPF1"
_ELEM = 32
_P = int(P)


class _Writer:
    def __init__(self, magic: bytes):
        self.parts = [magic]

    def section(self, values) -> None:
        values = list(values)
        self.parts.append(struct.pack("<I", len(values)))
        self.parts.extend(int(v).to_bytes(_ELEM, "little") for v in values)

    def getvalue(self) -> bytes:
        return b"".join(self.parts)


class _Reader:
    def __init__(self, data: bytes, magic: bytes):
        if not data.startswith(magic):
            raise ValueError("bad magic header")
        self.data = memoryview(data)
        self.pos = len(magic)

    def section(self, expected: int | None = None) -> list[int]:
        if self.pos + 4 > len(self.data):
            raise ValueError("truncated data")
        (count,) = struct.unpack_from("<I", self.data, self.pos)
        self.pos += 4
        if expected is not None and count != expected:
            raise ValueError(f"section has {count} elements, expected {expected}")
        end = self.pos + count * _ELEM
        if end > len(self.data):
            raise ValueError("truncated data")
        out = [int.from_bytes(self.data[i : i + _ELEM], "little") for i in range(self.pos, end, _ELEM)]
        self.pos = end
        return out

    def done(self) -> None:
        if self.pos != len(self.data):
            raise ValueError("trailing bytes")


def _g1_flat(points) -> list[int]:
    out = []
    for p in points:
        out.extend(p.xy())
    return out


def _g2_flat(points) -> list[int]:
    out = []
    for p in points:
        (x0, x1), (y0, y1) = p.xy()
        out.extend((x0, x1, y0, y1))
    return out


def g1_from_ints(x: int, y: int, check: bool = True) -> G1Point:
    if x == 0 and y == 0:
        return G1Point.identity()
    if not (0 <= x < _P and 0 <= y < _P):
        raise ValueError("coordinate out of range")
    if check:
        return G1Point.from_xy(x, y)
    return G1Point((mpz(x), mpz(y)), check=False)


def g2_from_ints(x0: int, x1: int, y0: int, y1: int, check: bool = True) -> G2Point:
    if not (x0 or x1 or y0 or y1):
        return G2Point.identity()
    if not all(0 <= c < _P for c in (x0, x1, y0, y1)):
        raise ValueError("coordinate out of range")
    if check:
        return G2Point.from_xy((x0, x1), (y0, y1))
    return G2Point(((mpz(x0), mpz(x1)), (mpz(y0), mpz(y1))), check=False)


def _g1_list(flat, check: bool) -> tuple:
    if len(flat) % 2:
        raise ValueError("odd G1 section length")
    return tuple(g1_from_ints(flat[i], flat[i + 1], check) for i in range(0, len(flat), 2))


def _g2_list(flat, check: bool) -> tuple:
    if len(flat) % 4:
        raise ValueError("G2 section length not a multiple of 4")
    return tuple(g2_from_ints(*flat[i : i + 4], check=check) for i in range(0, len(flat), 4))


def _digest_int(d: bytes) -> int:
    return int.from_bytes(d, "little")


def _digest_bytes(v: int) -> bytes:
    return v.to_bytes(32, "little")


# -- proof ---------------------------------------------------------------------

def proof_to_bytes(proof: Proof) -> bytes:
    w = _Writer(PROOF_MAGIC)
    w.section(_g1_flat([proof.a]) + _g2_flat([proof.b]) + _g1_flat([proof.c]))
    return w.getvalue()


def proof_from_bytes(data: bytes) -> Proof:
    """Decode a proof; raises ValueError for off-curve or malformed data."""
    r = _Reader(bytes(data), PROOF_MAGIC)
    v = r.section(8)
    r.done()
    return Proof(g1_from_ints(v[0], v[1]), g2_from_ints(*v[2:6]), g1_from_ints(v[6], v[7]))


PROOF_SIZE = len(PROOF_MAGIC) + 4 + 8 * _ELEM


def proof_to_json(proof: Proof) -> str:
    """One-line JSON with hex coordinates: {"a":[x,y],"b":[[x0,x1],[y0,y1]],"c":[x,y]}."""
    (bx, by) = proof.b.xy()
    obj = {
        "a": [hex(c) for c in proof.a.xy()],
        "b": [[hex(c) for c in bx], [hex(c) for c in by]],
        "c": [hex(c) for c in proof.c.xy()],
    }
    return json.dumps(obj, separators=(",", ":"))


def proof_args(proof: Proof) -> tuple:
    """(a, b, c) as integer tuples, the shape a verifier transaction takes."""
    return proof.a.xy(), proof.b.xy(), proof.c.xy()


def proof_from_args(a, b, c) -> Proof:
    (bx, by) = b
    return Proof(
        g1_from_ints(int(a[0]), int(a[1])),
        g2_from_ints(int(bx[0]), int(bx[1]), int(by[0]), int(by[1])),
        g1_from_ints(int(c[0]), int(c[1])),
    )


def proof_from_json(text: str) -> Proof:
    try:
        obj = json.loads(text)
        a = [int(x, 16) for x in obj["a"]]
        b = [[int(x, 16) for x in obj["b"][0]], [int(x, 16) for x in obj["b"][1]]]
        c = [int(x, 16) for x in obj["c"]]
    except (KeyError, TypeError, IndexError, json.JSONDecodeError) as exc:
        raise ValueError(f"malformed proof JSON: {exc}") from exc
    return proof_from_args(a, b, c)


# -- keys ----------------------------------------------------------------------

def vk_to_bytes(vk: VerifyingKey) -> bytes:
    w = _Writer(VK_MAGIC)
    w.section([_digest_int(vk.cs_digest)])
    w.section(_g1_flat([vk.alpha_g1]))
    w.section(_g2_flat([vk.beta_g2, vk.gamma_g2, vk.delta_g2]))
    w.section(_g1_flat(vk.ic))
    return w.getvalue()


def vk_from_bytes(data: bytes) -> VerifyingKey:
    r = _Reader(bytes(data), VK_MAGIC)
    (digest,) = r.section(1)
    (alpha,) = _g1_list(r.section(2), True)
    beta, gamma, delta = _g2_list(r.section(12), True)
    ic = _g1_list(r.section(), True)
    r.done()
    return VerifyingKey(alpha, beta, gamma, delta, ic, _digest_bytes(digest))


def pk_to_bytes(pk: ProvingKey) -> bytes:
    w = _Writer(PK_MAGIC)
    w.section([_digest_int(pk.cs_digest), pk.num_public])
    w.section(_g1_flat([pk.alpha_g1, pk.beta_g1, pk.delta_g1]))
    w.section(_g2_flat([pk.beta_g2, pk.delta_g2]))
    w.section(_g1_flat(pk.a_query))
    w.section(_g1_flat(pk.b_g1_query))
    w.section(_g2_flat(pk.b_g2_query))
    w.section(_g1_flat(pk.l_query))
    w.section(_g1_flat(pk.h_query))
    return w.getvalue()


def pk_from_bytes(data: bytes) -> ProvingKey:
    """Decode a proving key. Points are trusted (the file is local and digest-bound)."""
    r = _Reader(bytes(data), PK_MAGIC)
    digest, num_public = r.section(2)
    alpha, beta1, delta1 = _g1_list(r.section(6), False)
    beta2, delta2 = _g2_list(r.section(8), False)
    a_query = _g1_list(r.section(), False)
    b_g1 = _g1_list(r.section(), False)
    b_g2 = _g2_list(r.section(), False)
    l_query = _g1_list(r.section(), False)
    h_query = _g1_list(r.section(), False)
    r.done()
    return ProvingKey(alpha, beta1, beta2, delta1, delta2, a_query, b_g1, b_g2, l_query, h_query,
                      num_public, _digest_bytes(digest))


def save_keys(pk: ProvingKey, vk: VerifyingKey, stem: str | Path) -> tuple[Path, Path]:
    """Write `<stem>.pk` and `<stem>.vk`."""
    stem = Path(stem)
    pk_path = stem.with_name(stem.name + ".pk")
    vk_path = stem.with_name(stem.name + ".vk")
    pk_path.write_bytes(pk_to_bytes(pk))
    vk_path.write_bytes(vk_to_bytes(vk))
    return pk_path, vk_path


def load_proving_key(path: str | Path) -> ProvingKey:
    return pk_from_bytes(Path(path).read_bytes())


def load_verifying_key(path: str | Path) -> VerifyingKey:
    return vk_from_bytes(Path(path).read_bytes())


def save_proof(proof: Proof, path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(proof_to_bytes(proof))
    return path


def load_proof(path: str | Path) -> Proof:
    return proof_from_bytes(Path(path).read_bytes())
