"""Consumer and provider clients driving the offloading protocol end to end."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace

from ..algebra.curve import G1Point, G2Point
from ..ledger import STATES, BrokerContract, Ledger, Receipt, VerifierContract
from ..ledger.gas import GasSchedule
from ..snark import WitnessError, compute_witness, proof_args, prove
from ..tsp.circuit import MapRegistry, hash_elements, public_inputs_for
from ..tsp.model import TaskSpec, Tour, TspError, pad_path, unpad, validate_tour
from ..tsp.solve import solve_heuristic
from .keys import KeyStore

FAULTS = ("corrupt-sum", "corrupt-path", "corrupt-proof", "decouple-hash")
# faults that break the witness (the provider notices and may retry)
WITNESS_FAULTS = ("corrupt-sum", "corrupt-path")


class Network:
    """A ledger plus the deployed verifiers and the maps everyone agrees on."""

    def __init__(self, maps: MapRegistry, keys: KeyStore | None = None, schedule: GasSchedule | None = None):
        self.ledger = Ledger(schedule)
        self.maps = maps
        self.keys = keys
        self.operator = self.ledger.open_account(0)
        self.verifiers: dict[tuple[int, int], int] = {}

    @classmethod
    def restore(cls, ledger: Ledger, maps: MapRegistry, keys: KeyStore | None, operator: int,
                verifiers: dict[tuple[int, int], int]) -> Network:
        net = cls.__new__(cls)
        net.ledger = ledger
        net.maps = maps
        net.keys = keys
        net.operator = operator
        net.verifiers = dict(verifiers)
        return net

    def open_account(self, balance: int = 0) -> int:
        return self.ledger.open_account(balance)

    def ensure_verifier(self, mapnumber: int, tier: int) -> int:
        key = (mapnumber, tier)
        if key not in self.verifiers:
            if self.keys is None:
                raise RuntimeError("a key store is needed to deploy verifiers")
            vk = self.keys.verifying_key(mapnumber, tier)
            r = self.ledger.deploy(self.operator, VerifierContract(vk, mapnumber, tier))
            self.verifiers[key] = r.result["address"]
        return self.verifiers[key]

    def deploy_broker(self) -> int:
        r = self.ledger.deploy(self.operator, BrokerContract(self.maps, self.verifiers))
        return r.result["address"]

    def brokers(self) -> list[BrokerContract]:
        return [c for c in self.ledger.contracts.values() if isinstance(c, BrokerContract)]


@dataclass(frozen=True)
class Submission:
    """Arguments of a verified submitSolution call."""

    padded_path: tuple[int, ...]
    sum: int
    hash_of_path: tuple[int, int]
    hash_of_cities: tuple[int, int]
    proof: tuple

    def public_inputs(self) -> list[int]:
        return [self.sum, *self.hash_of_path, *self.hash_of_cities, 1]

    def args(self) -> tuple:
        return (list(self.padded_path), self.sum, list(self.hash_of_path), list(self.hash_of_cities), self.proof)


def _other_tour(path: list[int], rng: random.Random) -> list[int]:
    """A different sequence over the real cities of a padded path."""
    real = [i for i, c in enumerate(path) if c]
    out = list(path)
    if len(real) >= 2:
        i, j = rng.sample(real, 2)
        out[i], out[j] = out[j], out[i]
    else:
        out[real[0]] += 1
    return out


def tamper(sub: Submission, kind: str, rng: random.Random) -> Submission:
    """Adversarial variant of an honest submission."""
    if kind == "corrupt-sum":
        delta = rng.choice([1, -1, rng.randint(2, 10_000)])
        total = sub.sum + delta
        if total < 0:
            total = sub.sum + abs(delta)
        return replace(sub, sum=total)
    if kind == "corrupt-path":
        path = list(sub.padded_path)
        real = [i for i, c in enumerate(path) if c]
        if rng.random() < 0.5 and len(real) >= 2:
            i, j = rng.sample(real, 2)
            path[i] = path[j]  # a city visited twice, another skipped
        else:
            path = _other_tour(path, rng)
        return replace(sub, padded_path=tuple(path), hash_of_path=hash_elements(path).as_ints())
    if kind == "decouple-hash":
        # reuse the honest proof and digest for a different path
        return replace(sub, padded_path=tuple(_other_tour(list(sub.padded_path), rng)))
    if kind == "corrupt-proof":
        a, b, c = sub.proof
        which = rng.randrange(3)
        mode = rng.randrange(2)
        if which == 1:
            (x0, x1), (y0, y1) = b
            if mode == 0:
                coords = [x0, x1, y0, y1]
                k = rng.randrange(4)
                coords[k] = (coords[k] + rng.randint(1, 1 << 64)) % (1 << 254)
                b = ((coords[0], coords[1]), (coords[2], coords[3]))
            else:
                b = (G2Point.from_xy((x0, x1), (y0, y1)) + G2Point.generator() * rng.randint(1, 1 << 64)).xy()
        else:
            pt = a if which == 0 else c
            if mode == 0:
                coords = list(pt)
                k = rng.randrange(2)
                coords[k] = (coords[k] + rng.randint(1, 1 << 64)) % (1 << 254)
                pt = tuple(coords)
            else:
                pt = (G1Point.from_xy(*pt) + G1Point.generator() * rng.randint(1, 1 << 64)).xy()
            if which == 0:
                a = pt
            else:
                c = pt
        return replace(sub, proof=(a, b, c))
    raise ValueError(f"unknown fault {kind!r}; expected one of {FAULTS}")


@dataclass
class ProviderOutcome:
    status: str  # accepted | discarded | aborted
    receipt: Receipt | None = None
    tour: Tour | None = None
    attempts: int = 0
    witness_ms: float | None = None
    proof_ms: float | None = None
    reason: str | None = None
    submission: Submission | None = None


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


def build_submission(net: Network, task: TaskSpec, tour: Tour, *, fault: str | None = None,
                     persistent: bool = False, blinding_seed: bytes | None = None,
                     rng: random.Random | None = None) -> tuple[Submission | None, dict]:
    """Witness and proof for `tour`, retrying once after a witness failure."""
    rng = rng or random.Random(0)
    ck = net.keys.get(task.mapnumber, task.tier)
    cities = pad_path(task.cities, task.tier)
    stats = {"attempts": 0, "witness_ms": None, "proof_ms": None}
    z = None
    for attempt in range(2):
        stats["attempts"] = attempt + 1
        path = pad_path(tour.path, task.tier)
        total = tour.sum
        if fault in WITNESS_FAULTS and (attempt == 0 or persistent):
            if fault == "corrupt-sum":
                total += 1
            else:
                real = [i for i, c in enumerate(path) if c]
                if len(real) >= 2:
                    path[real[-1]] = path[real[0]]
                else:
                    path[real[0]] = 0
        public = public_inputs_for(total, path, cities)
        private = {"path": path, "mapnumber": task.mapnumber, "cities": cities}
        t0 = time.perf_counter()
        try:
            z = compute_witness(ck.circuit, public, private)
        except (WitnessError, TspError):
            z = None
            continue
        stats["witness_ms"] = _ms(t0)
        break
    if z is None:
        return None, stats
    t0 = time.perf_counter()
    proof = prove(ck.pk, ck.cs, z, blinding_seed)
    stats["proof_ms"] = _ms(t0)
    hp = (public[1], public[2])
    hc = (public[3], public[4])
    sub = Submission(tuple(path), total, hp, hc, proof_args(proof))
    if fault in ("corrupt-proof", "decouple-hash"):
        sub = tamper(sub, fault, rng)
    return sub, stats


def run_provider(net: Network, provider: int, broker: int, *, variant: str = "verified",
                 fault: str | None = None, persistent: bool = False, seed: int = 0,
                 tour: Tour | None = None) -> ProviderOutcome:
    """Fetch the task, solve it off-chain, prove and submit.

    Ledger errors propagate unchanged. A witness failure is retried once
    without the injected fault (unless `persistent`); a second failure
    aborts without submitting anything.
    """
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; expected one of {FAULTS}")
    info = net.ledger.view(provider, broker, "get_task_request")
    task = TaskSpec(info["mapnumber"], tuple(info["cities"]), info["tier"])
    m = net.maps.get(task.mapnumber)
    if tour is None:
        tour = solve_heuristic(m, task.cities, seed=seed)
    if variant == "unverified":
        r = net.ledger.transact(provider, broker, "submit_solution_unverified", list(tour.path), tour.sum)
        return ProviderOutcome(_status(r), r, tour, 1, reason=r.result["reason"])
    if variant == "onchain":
        r = net.ledger.transact(provider, broker, "submit_solution_onchain_check", list(tour.path), tour.sum)
        return ProviderOutcome(_status(r), r, tour, 1, reason=r.result["reason"])
    if variant != "verified":
        raise ValueError(f"unknown variant {variant!r}")

    blinding = f"zkoffload.blind:{seed}:{broker}:{provider}".encode()
    sub, stats = build_submission(net, task, tour, fault=fault, persistent=persistent,
                                  blinding_seed=blinding, rng=random.Random(f"{seed}:{broker}"))
    if sub is None:
        return ProviderOutcome("aborted", None, tour, stats["attempts"], reason="witness computation failed twice")
    r = net.ledger.transact(provider, broker, "submit_solution", *sub.args())
    return ProviderOutcome(_status(r), r, tour, stats["attempts"], stats["witness_ms"], stats["proof_ms"],
                           r.result["reason"], sub)


def _status(r: Receipt) -> str:
    return "accepted" if r.result["accepted"] else "discarded"


@dataclass
class ConsumerOutcome:
    broker: int
    status: str  # solved | refunded
    tour: Tour | None
    valid: bool | None
    receipts: list[Receipt] = field(default_factory=list)
    providers: list[ProviderOutcome] = field(default_factory=list)


def create_task(net: Network, consumer: int, task: TaskSpec, *, stake: int, verify_flag: bool,
                min_duration: int) -> tuple[int, Receipt]:
    if verify_flag:
        net.ensure_verifier(task.mapnumber, task.tier)
    broker = net.deploy_broker()
    r = net.ledger.transact(consumer, broker, "create_task_request", stake, task.to_json(), verify_flag, min_duration)
    return broker, r


def close_task(net: Network, consumer: int, broker: int) -> ConsumerOutcome:
    """Wait out the minimum duration, end the task and re-check the result."""
    b: BrokerContract = net.ledger.contract(broker)
    wait = b.created_at + b.min_duration - (net.ledger.height + 1)
    if wait > 0:
        net.ledger.advance_blocks(wait)
    r = net.ledger.transact(consumer, broker, "end_task")
    if r.result["refund"]:
        return ConsumerOutcome(broker, "refunded", None, None, [r])
    sol = net.ledger.view(consumer, broker, "retrieve_solution")
    tour = Tour(tuple(unpad(sol["path"])), sol["sum"])
    try:
        valid = validate_tour(net.maps.get(b.task.mapnumber), b.task.cities, tour)
    except TspError:
        valid = False
    return ConsumerOutcome(broker, "solved", tour, valid, [r])


def run_consumer(net: Network, consumer: int, task: TaskSpec, *, stake: int, verify_flag: bool = True,
                 min_duration: int = 3, providers=()) -> ConsumerOutcome:
    """Full lifecycle: create, let each provider callable act, close, re-validate."""
    broker, r0 = create_task(net, consumer, task, stake=stake, verify_flag=verify_flag, min_duration=min_duration)
    outcomes = [p(broker) for p in providers]
    out = close_task(net, consumer, broker)
    out.receipts.insert(0, r0)
    out.providers = outcomes
    return out


def check_invariants(net: Network) -> list[str]:
    """Problems found in the ledger; an empty list means all checks pass."""
    problems = []
    led = net.ledger
    if led.total_balance() != led.total_supply:
        problems.append(f"token supply changed: {led.total_balance()} != {led.total_supply}")
    for b in net.brokers():
        if b.state not in STATES:
            problems.append(f"broker {b.address} in unknown state {b.state!r}")
        if b.state == "running" and led.balance(b.address) != b.stake:
            problems.append(f"broker {b.address} escrow {led.balance(b.address)} != stake {b.stake}")
        if b.verify_flag and b.task is not None:
            m = net.maps.get(b.task.mapnumber)
            for sol in b.solutions:
                try:
                    ok = validate_tour(m, b.task.cities, Tour(tuple(unpad(sol["path"])), sol["sum"]))
                except TspError:
                    ok = False
                if not ok:
                    problems.append(f"broker {b.address} stores an invalid tour {sol['path']}")
    return problems


__all__ = [
    "FAULTS", "ConsumerOutcome", "Network", "ProviderOutcome", "Submission",
    "build_submission", "check_invariants", "close_task", "create_task", "run_consumer",
    "run_provider", "tamper",
]
