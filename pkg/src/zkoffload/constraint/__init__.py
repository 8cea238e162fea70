"""R1CS builder, evaluator and gadget library."""

from .gadgets import (
    gadget_bits,
    gadget_boolean,
    gadget_equal,
    gadget_hash,
    gadget_indexed_lookup,
    gadget_one_hot,
    gadget_path_sum,
    gadget_permutation_check,
    gadget_range_check,
    gadget_selector_set,
    lookup_lc,
    multiply,
)
from .mimc import HashDigest
from .system import (
    ONE,
    PRIVATE,
    PUBLIC,
    Assignment,
    ConstraintError,
    ConstraintSystem,
    LinearCombination,
    Variable,
    Visibility,
    is_satisfied,
)

__all__ = [
    "ONE", "PRIVATE", "PUBLIC", "Assignment", "ConstraintError", "ConstraintSystem",
    "HashDigest", "LinearCombination", "Variable", "Visibility", "gadget_bits",
    "gadget_boolean", "gadget_equal", "gadget_hash", "gadget_indexed_lookup", "gadget_one_hot",
    "gadget_path_sum", "gadget_permutation_check", "gadget_range_check", "gadget_selector_set",
    "is_satisfied", "lookup_lc", "multiply",
]
