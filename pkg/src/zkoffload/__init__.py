"""Verifiable computation offloading: zk-SNARK-checked TSP solutions on a simulated ledger."""

__version__ = "0.1.0"
