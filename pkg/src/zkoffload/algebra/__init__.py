"""BN254 field, groups and pairing.

This is protocol-correctness code: arithmetic is NOT constant time and must
not be used to handle real secrets.
"""

from .curve import G1Point, G2Point, multi_scalar_combine, scalar_mul
from .field import MODULUS, FieldElement, root_of_unity
from .pairing import TargetElement, pairing, pairing_product

__all__ = [
    "MODULUS",
    "FieldElement",
    "G1Point",
    "G2Point",
    "TargetElement",
    "multi_scalar_combine",
    "pairing",
    "pairing_product",
    "root_of_unity",
    "scalar_mul",
]
