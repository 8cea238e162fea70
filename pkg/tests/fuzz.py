"""Random-call fuzzing of the broker contract on a live ledger."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from zkoffload.harness import FAULTS, Network, build_submission, tamper
from zkoffload.ledger import ENDED, READY, RUNNING, LedgerError
from zkoffload.tsp import TaskSpec, Tour, pad_path, solve_exact, unpad, validate_tour

ALLOWED = {(READY, READY), (READY, RUNNING), (RUNNING, RUNNING), (RUNNING, ENDED), (ENDED, ENDED)}
POOL_TASKS = (TaskSpec(1, (2, 9, 17, 24)), TaskSpec(1, (1, 5, 6, 13, 28)))


@dataclass
class ProofPool:
    """Honest and tampered verified submissions for a few fixed t10 tasks."""

    honest: dict = field(default_factory=dict)
    tampered: dict = field(default_factory=dict)


def build_pool(net: Network, per_task: int = 12, seed: int = 0) -> ProofPool:
    rng = random.Random(seed)
    pool = ProofPool()
    for task in POOL_TASKS:
        m = net.maps.get(task.mapnumber)
        sub, _ = build_submission(net, task, solve_exact(m, task.cities), blinding_seed=b"pool", rng=rng)
        pool.honest[task] = sub
        pool.tampered[task] = [tamper(sub, FAULTS[i % len(FAULTS)], rng) for i in range(per_task)]
    return pool


@dataclass
class FuzzStats:
    steps: int = 0
    ok_calls: int = 0
    reverted: int = 0
    accepted_verified: int = 0
    rejected_verified: int = 0
    problems: list = field(default_factory=list)


def _snapshot(net: Network):
    led = net.ledger
    return (dict(led.accounts), led.height, len(led.log),
            {a: b.to_state() for a, b in led.contracts.items() if a not in net.verifiers.values()})


def _random_path(rng, task: TaskSpec, n_cities: int) -> list[int]:
    path = list(task.cities)
    rng.shuffle(path)
    r = rng.random()
    if r < 0.2 and len(path) > 1:
        path[rng.randrange(len(path))] = path[0]
    elif r < 0.3:
        path[rng.randrange(len(path))] = rng.randint(1, n_cities)
    elif r < 0.4:
        path = path[:-1]
    return path


def run_fuzz(net: Network, pool: ProofPool, steps: int, seed: int) -> FuzzStats:
    """Random interleaving of every broker call, legal or not.

    After each step: supply is conserved, a reverted call changed nothing,
    broker states only move forward, and verified brokers hold only valid tours.
    """
    rng = random.Random(seed)
    led = net.ledger
    stats = FuzzStats()
    for task in POOL_TASKS:
        net.ensure_verifier(task.mapnumber, task.tier)
    users = [net.open_account(rng.randint(0, 500)) for _ in range(6)]
    brokers: list[int] = []
    m1 = net.maps.get(1)

    def call(who, method, *args):
        return led.transact(who, rng.choice(brokers), method, *args) if brokers else None

    for step in range(steps):
        stats.steps += 1
        before = _snapshot(net)
        states = {a: led.contract(a).state for a in brokers}
        who = rng.choice(users)
        op = rng.choices(
            ["deploy", "create", "submit", "submit_bad", "unverified", "onchain", "end", "advance",
             "transfer", "view", "junk"],
            weights=[3, 6, 6, 8, 5, 5, 5, 4, 3, 4, 2])[0]
        try:
            if op == "deploy":
                brokers.append(net.deploy_broker())
            elif op == "create":
                verified = rng.random() < 0.6
                task = rng.choice(POOL_TASKS) if verified else TaskSpec(1, tuple(sorted(rng.sample(range(1, 31), rng.randint(1, 6)))))
                call(who, "create_task_request", rng.randint(0, 300), task.to_json(), verified, rng.randint(0, 4))
            elif op in ("submit", "submit_bad"):
                task = rng.choice(POOL_TASKS)
                sub = pool.honest[task] if op == "submit" else rng.choice(pool.tampered[task])
                call(who, "submit_solution", *sub.args())
            elif op == "unverified":
                task = TaskSpec(1, tuple(sorted(rng.sample(range(1, 31), 4))))
                p = _random_path(rng, task, m1.n)
                call(who, "submit_solution_unverified", pad_path(p, 10) if len(p) <= 10 else p, rng.randint(0, 400))
            elif op == "onchain":
                if brokers:
                    b = led.contract(rng.choice(brokers))
                    if b.task is not None:
                        p = _random_path(rng, b.task, m1.n)
                        total = solve_exact(m1, b.task.cities).sum if rng.random() < 0.3 else rng.randint(0, 400)
                        led.transact(who, b.address, "submit_solution_onchain_check", p, total)
            elif op == "end":
                call(who, "end_task")
            elif op == "advance":
                led.advance_blocks(rng.randint(0, 3))
            elif op == "transfer":
                led.transfer(who, rng.choice(users), rng.randint(0, 200))
            elif op == "view":
                if brokers:
                    led.view(who, rng.choice(brokers), rng.choice(["get_task_request", "retrieve_solution", "get_state"]))
            else:
                call(who, rng.choice(["create_task_request", "end_task", "submit_solution"]), *([None] * rng.randint(0, 3)))
            stats.ok_calls += 1
        except (LedgerError, TypeError) as exc:
            stats.reverted += 1
            after = _snapshot(net)
            if after != before:
                stats.problems.append(f"step {step}: reverted {op} ({exc}) changed state")
        if led.total_balance() != led.total_supply:
            stats.problems.append(f"step {step}: supply {led.total_balance()} != {led.total_supply}")
        for a in brokers:
            b = led.contract(a)
            if (states.get(a, READY), b.state) not in ALLOWED:
                stats.problems.append(f"step {step}: broker {a} moved {states.get(a)} -> {b.state}")
            if b.state == RUNNING and led.balance(a) != b.stake:
                stats.problems.append(f"step {step}: broker {a} escrow mismatch")
        if stats.problems:
            break

    for a in brokers:
        b = led.contract(a)
        if b.verify_flag:
            m = net.maps.get(b.task.mapnumber)
            for sol in b.solutions:
                if not validate_tour(m, b.task.cities, Tour(tuple(unpad(sol["path"])), sol["sum"])):
                    stats.problems.append(f"broker {a} stores invalid tour {sol['path']}")
    for r in led.log:
        if r.method == "submit_solution":
            if r.result["accepted"]:
                stats.accepted_verified += 1
            else:
                stats.rejected_verified += 1
    stored = sum(len(led.contract(a).solutions) for a in brokers if led.contract(a).verify_flag)
    if stored != stats.accepted_verified:
        stats.problems.append(f"{stored} verified solutions stored, {stats.accepted_verified} accepted receipts")
    return stats
