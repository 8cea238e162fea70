"""Gas and timing sweep over instance sizes and submission variants."""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass
from pathlib import Path

from ..tsp.model import TaskSpec, tier_for
from ..tsp.solve import solve_heuristic
from .config import ScenarioConfig
from .flow import Network, check_invariants, create_task, close_task, run_provider
from .keys import KeyStore

CSV_FIELDS = ("size", "map", "variant", "tier", "gas_used", "witness_time_ms", "proof_time_ms")
GAS_FIELDS = ("size", "map", "variant", "tier", "gas_used")
REFERENCE_PROOF_WITNESS_RATIO = 3.2


@dataclass
class BenchmarkRow:
    size: int
    map: int
    variant: str
    tier: int
    gas_used: int
    witness_time_ms: float | None
    proof_time_ms: float | None
    accepted: bool = True
    revalidated: bool = True

    def __post_init__(self):
        if self.gas_used <= 0:
            raise ValueError("gas must be positive")
        for t in (self.witness_time_ms, self.proof_time_ms):
            if t is not None and t < 0:
                raise ValueError("times must be non-negative")


@dataclass
class BenchmarkResult:
    rows: list[BenchmarkRow]
    summary: dict
    log_lines: list[str]
    problems: list[str]

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in self.rows:
            w.writerow([r.size, r.map, r.variant, r.tier, r.gas_used, _fmt(r.witness_time_ms), _fmt(r.proof_time_ms)])
        return buf.getvalue()

    def gas_columns(self) -> list[tuple]:
        return [tuple(getattr(r, f) for f in GAS_FIELDS) for r in self.rows]


def _fmt(t: float | None) -> str:
    return "" if t is None else f"{t:.3f}"


def read_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def instance_for(mapnumber: int, n: int, size: int, seed: int) -> TaskSpec:
    rng = random.Random(f"zkoffload.instance:{seed}:{mapnumber}:{size}")
    return TaskSpec(mapnumber, tuple(sorted(rng.sample(range(1, n + 1), size))), tier_for(size))


def crossover(rows: list[BenchmarkRow]) -> dict:
    """Where the on-chain check stops being cheaper than the verified variant.

    `first` is the smallest size at which on-chain gas is not below verified
    gas; `stable` is the smallest size from which on-chain gas stays above.
    """
    gas = {}
    for r in rows:
        gas.setdefault(r.size, {})[r.variant] = r.gas_used
    sizes = sorted(s for s, g in gas.items() if "onchain" in g and "verified" in g)
    first = next((s for s in sizes if gas[s]["onchain"] >= gas[s]["verified"]), None)
    stable = None
    for s in reversed(sizes):
        if gas[s]["onchain"] > gas[s]["verified"]:
            stable = s
        else:
            break
    below = [s for s in sizes if first is None or s < first]
    return {"first": first, "stable": stable, "sizes_compared": sizes,
            "onchain_cheaper_below_first": all(gas[s]["onchain"] < gas[s]["verified"] for s in below)}


def run_benchmark(config: ScenarioConfig, keys: KeyStore | None = None) -> BenchmarkResult:
    maps = config.registry()
    keys = keys or KeyStore(config.keys_dir, maps, seed=config.seed)
    net = Network(maps, keys, config.schedule())
    consumer = net.open_account(config.stake * 10_000)
    provider = net.open_account(0)
    jobs = [(m, s) for m in sorted(config.sizes) for s in sorted(config.sizes[m])]

    if "verified" in config.modes and jobs:
        # warm-up on the smallest circuit; its timings are thrown away
        m0, s0 = min(jobs, key=lambda j: (tier_for(j[1]), j[1]))
        task = instance_for(m0, maps.get(m0).n, s0, config.seed)
        warm = Network(maps, keys, config.schedule())
        c, p = warm.open_account(config.stake), warm.open_account(0)
        b, _ = create_task(warm, c, task, stake=config.stake, verify_flag=True, min_duration=0)
        run_provider(warm, p, b, seed=config.seed)

    rows = []
    for mapnumber, size in jobs:
        m = maps.get(mapnumber)
        task = instance_for(mapnumber, m.n, size, config.seed)
        tour = solve_heuristic(m, task.cities, seed=config.seed)
        for variant in config.modes:
            verify_flag = variant == "verified"
            broker, _ = create_task(net, consumer, task, stake=config.stake, verify_flag=verify_flag,
                                    min_duration=config.min_duration)
            out = run_provider(net, provider, broker, variant=variant, seed=config.seed, tour=tour)
            closed = close_task(net, consumer, broker)
            rows.append(BenchmarkRow(
                size=size, map=mapnumber, variant=variant, tier=task.tier, gas_used=out.receipt.gas_used,
                witness_time_ms=out.witness_ms if verify_flag else None,
                proof_time_ms=out.proof_ms if verify_flag else None,
                accepted=out.status == "accepted", revalidated=bool(closed.valid),
            ))

    problems = check_invariants(net)
    for r in rows:
        if not (r.accepted and r.revalidated):
            problems.append(f"size {r.size} map {r.map} {r.variant}: accepted={r.accepted} revalidated={r.revalidated}")
    timed = [r for r in rows if r.witness_time_ms is not None and r.proof_time_ms is not None]
    ratios = [r.proof_time_ms / r.witness_time_ms for r in timed if r.witness_time_ms > 0]
    summary = {
        "crossover": crossover(rows),
        "mean_proof_witness_ratio": sum(ratios) / len(ratios) if ratios else None,
        "reference_proof_witness_ratio": REFERENCE_PROOF_WITNESS_RATIO,
        "witness_below_proof_every_row": all(r.witness_time_ms < r.proof_time_ms for r in timed),
        "rows": len(rows),
        "problems": problems,
    }
    result = BenchmarkResult(rows, summary, net.ledger.log_lines(), problems)
    if config.csv_path:
        Path(config.csv_path).write_text(result.csv_text())
    if config.log_path:
        net.ledger.export_log(config.log_path)
    if config.summary_path:
        Path(config.summary_path).write_text(json.dumps(summary, indent=2) + "\n")
    return result


__all__ = ["BenchmarkResult", "BenchmarkRow", "CSV_FIELDS", "GAS_FIELDS", "crossover", "instance_for",
           "read_csv", "run_benchmark"]
