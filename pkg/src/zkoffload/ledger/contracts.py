"""Broker and verifier contracts.

The broker escrows the consumer's stake, collects solutions and pays the
first accepted provider when the task is closed. The verifier wraps one
verifying key, bound to a (mapnumber, tier) pair.
"""

from __future__ import annotations

from functools import lru_cache

from ..algebra.field import MODULUS
from ..snark import VerifyingKey, proof_from_args, verify, vk_from_bytes, vk_to_bytes
from ..tsp.circuit import EXPECTED_RETURN, NUM_PUBLIC, MapRegistry, hash_elements
from ..tsp.model import SENTINEL, TaskSpec, TspError, pad_path
from .chain import Context, Contract, LedgerError, WrongState

READY = "ready"
RUNNING = "running"
ENDED = "ended"
STATES = (READY, RUNNING, ENDED)
CITIES_PER_WORD = 32


class TooEarly(LedgerError):
    pass


class NoSolution(LedgerError):
    pass


def _int_list(xs, what: str) -> list[int]:
    try:
        out = [x for x in xs]
    except TypeError:
        raise LedgerError(f"{what} must be a list of integers") from None
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in out):
        raise LedgerError(f"{what} must be a list of integers")
    return [int(x) for x in out]


def _digest_pair(x, what: str) -> tuple[int, int]:
    vals = _int_list(x, what)
    if len(vals) != 2:
        raise LedgerError(f"{what} must have two limbs")
    return vals[0], vals[1]


def _strip(path: list[int]) -> list[int]:
    """Drop trailing sentinel padding."""
    out = list(path)
    while out and out[-1] == SENTINEL:
        out.pop()
    return out


class VerifierContract(Contract):
    """Stateless proof checker for one (mapnumber, tier) circuit."""

    kind = "verifier"

    def __init__(self, vk: VerifyingKey, mapnumber: int, tier: int):
        if vk.num_public != NUM_PUBLIC:
            raise ValueError(f"verifying key expects {vk.num_public} inputs, circuit has {NUM_PUBLIC}")
        self.vk = vk
        self.mapnumber = mapnumber
        self.tier = tier
        self._check = lru_cache(maxsize=4096)(self._check_uncached)

    def _check_uncached(self, a, b, c, inputs) -> bool:
        try:
            proof = proof_from_args(a, b, c)
        except (ValueError, TypeError, IndexError):
            return False
        return verify(self.vk, list(inputs), proof)

    def verify_tx(self, ctx: Context, a, b, c, inputs) -> bool:
        inputs = _int_list(inputs, "input")
        if len(inputs) != NUM_PUBLIC:
            raise LedgerError(f"verify_tx takes {NUM_PUBLIC} public inputs, got {len(inputs)}")
        ctx.meter.charge_amount("verify", ctx.meter.schedule.verify_cost(len(inputs)))
        if any(not 0 <= x < MODULUS for x in inputs):
            return False
        try:
            key = (tuple(int(v) for v in a), (tuple(int(v) for v in b[0]), tuple(int(v) for v in b[1])),
                   tuple(int(v) for v in c))
            if len(key[0]) != 2 or len(key[2]) != 2 or len(key[1][0]) != 2 or len(key[1][1]) != 2:
                return False
        except (TypeError, ValueError, IndexError):
            return False
        return self._check(*key, tuple(inputs))

    def to_state(self) -> dict:
        return {"kind": self.kind, "mapnumber": self.mapnumber, "tier": self.tier, "vk": vk_to_bytes(self.vk).hex()}

    @classmethod
    def from_state(cls, st: dict) -> VerifierContract:
        return cls(vk_from_bytes(bytes.fromhex(st["vk"])), st["mapnumber"], st["tier"])


class BrokerContract(Contract):
    """One offloaded task: ready -> running -> ended."""

    kind = "broker"
    _fields = ("state", "consumer", "task", "stake", "verify_flag", "min_duration",
               "created_at", "solutions", "cities_hash")
    _views = frozenset({"get_task_request", "retrieve_solution", "get_state"})

    def __init__(self, maps: MapRegistry, verifiers: dict[tuple[int, int], int] | None = None):
        self.maps = maps
        self.verifiers = dict(verifiers or {})
        self.state = READY
        self.consumer: int | None = None
        self.task: TaskSpec | None = None
        self.stake = 0
        self.verify_flag = False
        self.min_duration = 0
        self.created_at = 0
        self.solutions: list[dict] = []
        self.cities_hash: tuple[int, int] | None = None

    def _require(self, state: str) -> None:
        if self.state != state:
            raise WrongState(f"broker is {self.state}, expected {state}")

    # -- task lifecycle ---------------------------------------------------

    def create_task_request(self, ctx: Context, stake: int, task_info, verify_flag: bool, min_duration: int) -> dict:
        self._require(READY)
        if not isinstance(stake, int) or isinstance(stake, bool) or stake < 0:
            raise LedgerError(f"invalid stake {stake!r}")
        if not isinstance(min_duration, int) or min_duration < 0:
            raise LedgerError(f"invalid minimum duration {min_duration!r}")
        try:
            task = task_info if isinstance(task_info, TaskSpec) else TaskSpec.from_json(task_info)
        except (TspError, KeyError, TypeError) as exc:
            raise LedgerError(f"malformed task: {exc}") from exc
        if task.mapnumber not in self.maps:
            raise LedgerError(f"unknown map {task.mapnumber}")
        m = self.maps.get(task.mapnumber)
        if any(not 1 <= c <= m.n for c in task.cities):
            raise LedgerError("task names cities that are not on the map")
        verify_flag = bool(verify_flag)
        if verify_flag and (task.mapnumber, task.tier) not in self.verifiers:
            raise LedgerError(f"no verifier deployed for map {task.mapnumber}, tier {task.tier}")

        ctx.charge("calldata_word", len(task.cities) + 4)
        ctx.charge("storage_write", len(task.cities) + 6)
        ctx.ledger._move(ctx.caller, ctx.address, stake)
        if verify_flag:
            ctx.charge("hash_element", task.tier)
            self.cities_hash = hash_elements(pad_path(task.cities, task.tier)).as_ints()
        self.state = RUNNING
        self.consumer = ctx.caller
        self.task = task
        self.stake = stake
        self.verify_flag = verify_flag
        self.min_duration = min_duration
        self.created_at = ctx.block + 1  # the block this transaction lands in
        return {"state": self.state, "stake": stake}

    def get_task_request(self, ctx: Context) -> dict:
        self._require(RUNNING)
        return {
            "cities": list(self.task.cities), "mapnumber": self.task.mapnumber, "tier": self.task.tier,
            "verify_flag": self.verify_flag, "stake": self.stake, "min_duration": self.min_duration,
            "created_at": self.created_at,
        }

    def get_state(self, ctx: Context) -> str:
        return self.state

    def end_task(self, ctx: Context) -> dict:
        self._require(RUNNING)
        if ctx.block + 1 < self.created_at + self.min_duration:
            raise TooEarly(f"task can be ended in block {self.created_at + self.min_duration}, next is {ctx.block + 1}")
        ctx.charge("storage_write")
        if self.solutions:
            payee = self.solutions[0]["provider"]
        else:
            payee = self.consumer
        ctx.transfer_out(payee, self.stake)
        self.state = ENDED
        return {"state": self.state, "paid_to": payee, "amount": self.stake, "refund": not self.solutions}

    def retrieve_solution(self, ctx: Context) -> dict:
        self._require(ENDED)
        if not self.solutions:
            raise NoSolution("no solution was accepted for this task")
        sol = self.solutions[0]
        return {"path": list(sol["path"]), "sum": sol["sum"], "provider": sol["provider"]}

    # -- submissions ------------------------------------------------------

    def _store(self, ctx: Context, path: list[int], total: int, variant: str) -> None:
        # city indices are packed CITIES_PER_WORD to a storage word; +2 for sum and provider
        ctx.charge("storage_write", -(-len(path) // CITIES_PER_WORD) + 2)
        self.solutions.append({"provider": ctx.caller, "path": list(path), "sum": total,
                               "variant": variant, "block": ctx.block + 1})

    def submit_solution(self, ctx: Context, padded_path, total: int, hash_of_path, hash_of_cities, proof) -> dict:
        """Verified submission: hash binding in the contract, then the proof check."""
        self._require(RUNNING)
        if not self.verify_flag:
            raise WrongState("task does not take verified submissions")
        path = _int_list(padded_path, "path")
        if len(path) != self.task.tier:
            raise LedgerError(f"padded path must have {self.task.tier} entries, got {len(path)}")
        if not isinstance(total, int) or isinstance(total, bool):
            raise LedgerError("sum must be an integer")
        hp = _digest_pair(hash_of_path, "hash_of_path")
        hc = _digest_pair(hash_of_cities, "hash_of_cities")
        try:
            a, b, c = proof
        except (TypeError, ValueError):
            raise LedgerError("proof must be an (a, b, c) triple") from None

        ctx.charge("calldata_word", len(path) + 1 + 4 + 8)
        ctx.charge("storage_read", 2)
        ctx.charge("hash_element", len(path))
        if any(not 0 <= p < MODULUS for p in path) or tuple(hash_elements(path).as_ints()) != hp:
            return {"accepted": False, "reason": "path hash mismatch"}
        if hc != tuple(self.cities_hash):
            return {"accepted": False, "reason": "cities hash mismatch"}
        if not 0 <= total < MODULUS:
            return {"accepted": False, "reason": "sum out of range"}
        inputs = [total, hp[0], hp[1], hc[0], hc[1], EXPECTED_RETURN]
        verifier = self.verifiers[(self.task.mapnumber, self.task.tier)]
        verdict = ctx.call(verifier, "verify_tx", a, b, c, inputs)
        if not verdict:
            return {"accepted": False, "reason": "proof rejected"}
        self._store(ctx, path, total, "verified")
        return {"accepted": True, "reason": None}

    def submit_solution_unverified(self, ctx: Context, path, total: int) -> dict:
        self._require(RUNNING)
        if self.verify_flag:
            raise WrongState("task requires verified submissions")
        path = _strip(_int_list(path, "path"))
        if not isinstance(total, int) or isinstance(total, bool):
            raise LedgerError("sum must be an integer")
        ctx.charge("calldata_word", len(path) + 1)
        self._store(ctx, path, total, "unverified")
        return {"accepted": True, "reason": None}

    def submit_solution_onchain_check(self, ctx: Context, path, total: int) -> dict:
        """Check the tour inside the metered environment, one loop step per city."""
        self._require(RUNNING)
        if self.verify_flag:
            raise WrongState("task requires verified submissions")
        path = _strip(_int_list(path, "path"))
        if not isinstance(total, int) or isinstance(total, bool):
            raise LedgerError("sum must be an integer")
        m = self.maps.get(self.task.mapnumber)
        task_cities = set(self.task.cities)
        ctx.charge("calldata_word", len(path) + 1)
        ctx.charge("storage_read", 1)
        visited: set[int] = set()
        ok = len(path) == len(task_cities)
        length = 0
        for i, city in enumerate(path):
            # membership read, visited mark, distance read, loop arithmetic
            ctx.charge("storage_read", 2)
            ctx.charge("storage_write", 1)
            ctx.charge("arith_step", 8)
            if city not in task_cities or city in visited:
                ok = False
                continue
            visited.add(city)
            nxt = path[(i + 1) % len(path)]
            if 1 <= nxt <= m.n:
                length += m.d(city, nxt)
        ok = ok and length == total
        if not ok:
            return {"accepted": False, "reason": "tour check failed"}
        self._store(ctx, path, total, "onchain")
        return {"accepted": True, "reason": None}

    # -- persistence ------------------------------------------------------

    def to_state(self) -> dict:
        return {
            "kind": self.kind,
            "verifiers": [[k[0], k[1], v] for k, v in sorted(self.verifiers.items())],
            "state": self.state, "consumer": self.consumer,
            "task": self.task.to_json() if self.task else None,
            "stake": self.stake, "verify_flag": self.verify_flag, "min_duration": self.min_duration,
            "created_at": self.created_at, "solutions": self.solutions,
            "cities_hash": list(self.cities_hash) if self.cities_hash else None,
        }

    @classmethod
    def from_state(cls, st: dict, maps: MapRegistry) -> BrokerContract:
        b = cls(maps, {(m, t): a for m, t, a in st["verifiers"]})
        b.state = st["state"]
        b.consumer = st["consumer"]
        b.task = TaskSpec.from_json(st["task"]) if st["task"] else None
        b.stake = st["stake"]
        b.verify_flag = st["verify_flag"]
        b.min_duration = st["min_duration"]
        b.created_at = st["created_at"]
        b.solutions = st["solutions"]
        b.cities_hash = tuple(st["cities_hash"]) if st["cities_hash"] else None
        return b


def contract_loaders(maps: MapRegistry) -> dict:
    return {
        VerifierContract.kind: VerifierContract.from_state,
        BrokerContract.kind: lambda st: BrokerContract.from_state(st, maps),
    }


__all__ = [
    "BrokerContract", "VerifierContract", "NoSolution", "TooEarly", "READY", "RUNNING", "ENDED", "STATES",
    "CITIES_PER_WORD", "contract_loaders",
]
