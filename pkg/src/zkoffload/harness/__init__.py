"""Consumer/provider clients, the benchmark sweep and the CLI."""

from .bench import BenchmarkResult, BenchmarkRow, crossover, instance_for, read_csv, run_benchmark
from .config import MODES, ScenarioConfig
from .flow import (
    FAULTS,
    ConsumerOutcome,
    Network,
    ProviderOutcome,
    Submission,
    build_submission,
    check_invariants,
    close_task,
    create_task,
    run_consumer,
    run_provider,
    tamper,
)
from .keys import CircuitKeys, KeyStore

__all__ = [
    "BenchmarkResult", "BenchmarkRow", "crossover", "instance_for", "read_csv", "run_benchmark",
    "MODES", "ScenarioConfig", "FAULTS", "ConsumerOutcome", "Network", "ProviderOutcome", "Submission",
    "build_submission", "check_invariants", "close_task", "create_task", "run_consumer", "run_provider",
    "tamper", "CircuitKeys", "KeyStore",
]
