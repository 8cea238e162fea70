"""Preprocessing zk-SNARK (Groth16) over the BN254 pairing groups."""

from .groth16 import (
    KeyMismatchError,
    Proof,
    ProvingKey,
    SnarkError,
    UnsatisfiedError,
    VerifyingKey,
    WitnessError,
    compute_witness,
    prove,
    setup,
    verify,
)
from .qap import QapError, QapInstance, r1cs_to_qap
from .serialize import (
    PROOF_SIZE,
    load_proof,
    load_proving_key,
    load_verifying_key,
    pk_from_bytes,
    pk_to_bytes,
    proof_args,
    proof_from_args,
    proof_from_bytes,
    proof_from_json,
    proof_to_bytes,
    proof_to_json,
    save_keys,
    save_proof,
    vk_from_bytes,
    vk_to_bytes,
)

__all__ = [
    "KeyMismatchError", "Proof", "ProvingKey", "SnarkError", "UnsatisfiedError", "VerifyingKey",
    "WitnessError", "compute_witness", "prove", "setup", "verify",
    "QapError", "QapInstance", "r1cs_to_qap",
    "PROOF_SIZE", "load_proof", "load_proving_key", "load_verifying_key", "pk_from_bytes",
    "pk_to_bytes", "proof_args", "proof_from_args", "proof_from_bytes", "proof_from_json",
    "proof_to_bytes", "proof_to_json", "save_keys", "save_proof", "vk_from_bytes", "vk_to_bytes",
]
