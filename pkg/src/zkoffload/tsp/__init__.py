"""TSP use case: instances, solvers, padding, hashing and the circuit."""

from .circuit import (
    NUM_PUBLIC,
    MapRegistry,
    TspCircuit,
    TspInputs,
    build_tsp_circuit,
    hash_elements,
    make_inputs,
    public_inputs_for,
)
from .model import (
    SENTINEL,
    TIERS,
    TaskSpec,
    Tour,
    TspError,
    TspMap,
    generate_map,
    pad_path,
    pad_tour,
    tier_for,
    tour_length,
    unpad,
    validate_tour,
)
from .solve import solve_exact, solve_heuristic

__all__ = [
    "NUM_PUBLIC", "SENTINEL", "TIERS", "MapRegistry", "TaskSpec", "Tour", "TspCircuit",
    "TspError", "TspInputs", "TspMap", "build_tsp_circuit", "generate_map", "hash_elements",
    "make_inputs", "pad_path", "pad_tour", "public_inputs_for", "solve_exact",
    "solve_heuristic", "tier_for", "tour_length", "unpad", "validate_tour",
]
