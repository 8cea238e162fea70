"""Simulated ledger with the broker and verifier contracts."""

from .chain import Context, Contract, InsufficientBalance, Ledger, LedgerError, Receipt, WrongState
from .contracts import (
    CITIES_PER_WORD,
    ENDED,
    READY,
    RUNNING,
    STATES,
    BrokerContract,
    NoSolution,
    TooEarly,
    VerifierContract,
    contract_loaders,
)
from .gas import GasMeter, GasSchedule, OutOfGas

__all__ = [
    "Context", "Contract", "InsufficientBalance", "Ledger", "LedgerError", "Receipt", "WrongState",
    "CITIES_PER_WORD", "ENDED", "READY", "RUNNING", "STATES", "BrokerContract", "NoSolution",
    "TooEarly", "VerifierContract", "contract_loaders", "GasMeter", "GasSchedule", "OutOfGas",
]
