"""Command-line entry point.

    zkoffload keys setup     [--config C] [--map M --tier T]
    zkoffload task create    --state S --map M (--cities 1,2,3 | --size N)
    zkoffload provider run   --state S --broker B [--variant V] [--fault F]
    zkoffload consumer run   --state S --broker B
    zkoffload bench sweep    [--config C] [--out CSV] [--log JSONL]

Ledger state lives in a JSON file between invocations. Every command that
touches the ledger re-checks the ledger invariants and exits non-zero if one
fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..ledger import Ledger, LedgerError, contract_loaders
from ..snark import proof_from_args, proof_to_json, save_proof
from ..tsp.model import TaskSpec, TspError, tier_for
from .bench import instance_for, run_benchmark
from .config import ScenarioConfig
from .flow import FAULTS, Network, check_invariants, close_task, create_task, run_provider
from .keys import KeyStore


def _config(args) -> ScenarioConfig:
    cfg = ScenarioConfig.load(args.config) if args.config else ScenarioConfig.default()
    if getattr(args, "keys_dir", None):
        cfg.keys_dir = Path(args.keys_dir)
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    return cfg


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _load_network(args, cfg: ScenarioConfig) -> tuple[Network, dict]:
    state = json.loads(Path(args.state).read_text())
    maps = cfg.registry()
    ledger = Ledger.from_dict(state["ledger"], contract_loaders(maps))
    meta = state["meta"]
    keys = KeyStore(cfg.keys_dir, maps, seed=meta["key_seed"])
    verifiers = {(m, t): a for m, t, a in meta["verifiers"]}
    return Network.restore(ledger, maps, keys, meta["operator"], verifiers), meta


def _save_network(args, net: Network, meta: dict) -> None:
    meta = dict(meta, verifiers=[[m, t, a] for (m, t), a in sorted(net.verifiers.items())])
    Path(args.state).write_text(json.dumps({"meta": meta, "ledger": net.ledger.to_dict()}, sort_keys=True) + "\n")


def _finish(net: Network, log: str | None) -> int:
    if log:
        net.ledger.export_log(log)
    problems = check_invariants(net)
    for p in problems:
        print(f"invariant violated: {p}", file=sys.stderr)
    return 1 if problems else 0


def cmd_keys_setup(args) -> int:
    cfg = _config(args)
    maps = cfg.registry()
    store = KeyStore(cfg.keys_dir, maps, seed=cfg.seed)
    if args.map is not None:
        if args.tier is None:
            print("--tier is required with --map", file=sys.stderr)
            return 2
        pairs = [(args.map, args.tier)]
    else:
        pairs = sorted({(m, tier_for(s)) for m, sizes in cfg.sizes.items() for s in sizes})
    for m, t in pairs:
        ck = store.get(m, t)
        _emit({"map": m, "tier": t, "constraints": len(ck.cs.constraints), "digest": ck.cs.digest().hex()})
    return 0


def cmd_task_create(args) -> int:
    cfg = _config(args)
    maps = cfg.registry()
    if Path(args.state).exists():
        net, meta = _load_network(args, cfg)
    else:
        net = Network(maps, KeyStore(cfg.keys_dir, maps, seed=cfg.seed), cfg.schedule())
        meta = {"operator": net.operator, "consumer": net.open_account(args.balance),
                "provider": net.open_account(0), "key_seed": cfg.seed, "verifiers": []}
    m = maps.get(args.map)
    if args.cities:
        task = TaskSpec(args.map, tuple(int(c) for c in args.cities.split(",")))
    elif args.size:
        task = instance_for(args.map, m.n, args.size, cfg.seed)
    else:
        print("one of --cities or --size is required", file=sys.stderr)
        return 2
    try:
        broker, r = create_task(net, meta["consumer"], task, stake=args.stake, verify_flag=not args.no_verify,
                                min_duration=args.min_duration)
    except (LedgerError, TspError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _save_network(args, net, meta)
    _emit({"broker": broker, "task": task.to_json(), "gas_used": r.gas_used, "block": r.block})
    return _finish(net, args.log)


def cmd_provider_run(args) -> int:
    cfg = _config(args)
    net, meta = _load_network(args, cfg)
    try:
        out = run_provider(net, meta["provider"], args.broker, variant=args.variant, fault=args.fault,
                           persistent=args.persistent_fault, seed=cfg.seed)
    except LedgerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _save_network(args, net, meta)
    report = {"status": out.status, "attempts": out.attempts, "reason": out.reason,
              "gas_used": out.receipt.gas_used if out.receipt else None,
              "witness_ms": out.witness_ms, "proof_ms": out.proof_ms}
    if out.submission is not None:
        try:
            proof = proof_from_args(*out.submission.proof)
            report["proof"] = json.loads(proof_to_json(proof))
            if args.proof_out:
                save_proof(proof, args.proof_out)
        except ValueError:
            report["proof"] = None  # a corrupted point does not decode
    _emit(report)
    return _finish(net, args.log)


def cmd_consumer_run(args) -> int:
    cfg = _config(args)
    net, meta = _load_network(args, cfg)
    try:
        out = close_task(net, meta["consumer"], args.broker)
    except LedgerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _save_network(args, net, meta)
    _emit({"status": out.status, "valid": out.valid,
           "tour": list(out.tour.path) if out.tour else None, "sum": out.tour.sum if out.tour else None,
           "consumer_balance": net.ledger.balance(meta["consumer"]),
           "provider_balance": net.ledger.balance(meta["provider"])})
    code = _finish(net, args.log)
    if out.status == "solved" and not out.valid:
        return 1
    return code


def cmd_bench_sweep(args) -> int:
    cfg = _config(args)
    if args.out:
        cfg.csv_path = Path(args.out)
    if args.log:
        cfg.log_path = Path(args.log)
    if args.summary:
        cfg.summary_path = Path(args.summary)
    if args.sizes:
        wanted = {int(s) for s in args.sizes.split(",")}
        cfg.sizes = {m: [s for s in sizes if s in wanted] for m, sizes in cfg.sizes.items()}
    result = run_benchmark(cfg)
    if not cfg.csv_path:
        sys.stdout.write(result.csv_text())
    _emit({"summary": result.summary})
    for p in result.problems:
        print(f"invariant violated: {p}", file=sys.stderr)
    return 1 if result.problems else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zkoffload", description="Verifiable TSP offloading on a simulated ledger.")
    sub = parser.add_subparsers(dest="group", required=True)

    def common(p, state=True):
        p.add_argument("--config", help="scenario config JSON (defaults to the packaged one)")
        p.add_argument("--keys-dir", help="key cache directory")
        p.add_argument("--seed", type=int, help="override the config seed")
        if state:
            p.add_argument("--state", required=True, help="ledger state file")
            p.add_argument("--log", help="write the receipt log as JSON lines")

    keys = sub.add_parser("keys").add_subparsers(dest="action", required=True)
    p = keys.add_parser("setup", help="generate (or load) circuit keys")
    common(p, state=False)
    p.add_argument("--map", type=int)
    p.add_argument("--tier", type=int)
    p.set_defaults(func=cmd_keys_setup)

    task = sub.add_parser("task").add_subparsers(dest="action", required=True)
    p = task.add_parser("create", help="deploy a broker and open a task")
    common(p)
    p.add_argument("--map", type=int, required=True)
    p.add_argument("--cities", help="comma-separated city ids")
    p.add_argument("--size", type=int, help="draw a random instance of this size")
    p.add_argument("--stake", type=int, default=100)
    p.add_argument("--balance", type=int, default=1_000_000, help="consumer balance for a fresh state")
    p.add_argument("--min-duration", type=int, default=3)
    p.add_argument("--no-verify", action="store_true", help="accept unverified submissions")
    p.set_defaults(func=cmd_task_create)

    prov = sub.add_parser("provider").add_subparsers(dest="action", required=True)
    p = prov.add_parser("run", help="solve, prove and submit")
    common(p)
    p.add_argument("--broker", type=int, required=True)
    p.add_argument("--variant", choices=("verified", "unverified", "onchain"), default="verified")
    p.add_argument("--fault", choices=FAULTS)
    p.add_argument("--persistent-fault", action="store_true", help="keep the fault on the retry")
    p.add_argument("--proof-out", help="write the submitted proof to this .proof file")
    p.set_defaults(func=cmd_provider_run)

    cons = sub.add_parser("consumer").add_subparsers(dest="action", required=True)
    p = cons.add_parser("run", help="end the task and re-validate the solution")
    common(p)
    p.add_argument("--broker", type=int, required=True)
    p.set_defaults(func=cmd_consumer_run)

    bench = sub.add_parser("bench").add_subparsers(dest="action", required=True)
    p = bench.add_parser("sweep", help="gas and timing sweep")
    common(p, state=False)
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--log", help="ledger log (JSON lines)")
    p.add_argument("--summary", help="summary JSON path")
    p.add_argument("--sizes", help="restrict to these comma-separated sizes")
    p.set_defaults(func=cmd_bench_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
