"""A single-writer simulated ledger: accounts, contracts, receipts.

Transactions run one at a time under a lock. A transaction either completes,
producing a receipt and advancing the height by one, or raises, in which case
balances and contract state are rolled back and nothing is logged.
"""

from __future__ import annotations

import copy
import json
import threading
from dataclasses import dataclass
from pathlib import Path

from .gas import GasMeter, GasSchedule


class LedgerError(Exception):
    """A reverted transaction."""


class WrongState(LedgerError):
    pass


class InsufficientBalance(LedgerError):
    pass


def jsonable(x):
    """Normalize call arguments and results into plain JSON values."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return int(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    if hasattr(x, "__int__"):
        return int(x)
    return repr(x)


@dataclass(frozen=True)
class Receipt:
    tx_id: int
    caller: int
    target: int | None
    method: str
    args: list
    gas_used: int
    gas_items: dict
    result: object
    block: int

    def to_dict(self) -> dict:
        return {
            "tx_id": self.tx_id, "caller": self.caller, "target": self.target, "method": self.method,
            "args": self.args, "gas_used": self.gas_used, "gas_items": self.gas_items,
            "result": self.result, "block": self.block,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Receipt:
        return cls(d["tx_id"], d["caller"], d["target"], d["method"], d["args"], d["gas_used"],
                   d["gas_items"], d["result"], d["block"])


class Contract:
    """Base class. Subclasses list their mutable attributes in `_fields`."""

    kind = "contract"
    _fields: tuple[str, ...] = ()
    _views: frozenset[str] = frozenset()
    address: int | None = None

    def snapshot(self):
        return {f: copy.deepcopy(getattr(self, f)) for f in self._fields}

    def restore(self, snap) -> None:
        for f, v in snap.items():
            setattr(self, f, v)

    def to_state(self) -> dict:
        raise NotImplementedError


class Context:
    """What a contract method sees while executing."""

    def __init__(self, ledger: Ledger, caller: int, address: int, meter: GasMeter):
        self.ledger = ledger
        self.caller = caller
        self.address = address
        self.meter = meter

    @property
    def block(self) -> int:
        return self.ledger.height

    def charge(self, item: str, count: int = 1) -> None:
        self.meter.charge(item, count)

    def transfer_out(self, to: int, amount: int) -> None:
        self.ledger._move(self.address, to, amount)

    def call(self, address: int, method: str, *args):
        """Internal message call; shares the caller's gas meter."""
        self.meter.charge("call")
        contract = self.ledger._contract(address)
        inner = Context(self.ledger, self.address, address, self.meter)
        return getattr(contract, method)(inner, *args)


class Ledger:
    def __init__(self, gas_schedule: GasSchedule | None = None):
        self.gas = gas_schedule or GasSchedule.default()
        self.accounts: dict[int, int] = {}
        self.contracts: dict[int, Contract] = {}
        self.height = 0
        self.log: list[Receipt] = []
        self.total_supply = 0
        self._next_address = 1
        self._lock = threading.Lock()

    # -- genesis / inspection ---------------------------------------------

    def open_account(self, balance: int = 0) -> int:
        """Create an externally owned account. Minting happens only here."""
        if balance < 0:
            raise ValueError("negative balance")
        with self._lock:
            addr = self._next_address
            self._next_address += 1
            self.accounts[addr] = int(balance)
            self.total_supply += int(balance)
            return addr

    def balance(self, address: int) -> int:
        return self.accounts.get(address, 0)

    def total_balance(self) -> int:
        return sum(self.accounts.values())

    def contract(self, address: int) -> Contract:
        return self._contract(address)

    def _contract(self, address: int) -> Contract:
        try:
            return self.contracts[address]
        except KeyError:
            raise LedgerError(f"no contract at address {address}") from None

    def _move(self, src: int, dst: int, amount: int) -> None:
        if not isinstance(amount, int) or isinstance(amount, bool) or amount < 0:
            raise LedgerError(f"invalid amount {amount!r}")
        if dst not in self.accounts:
            raise LedgerError(f"unknown account {dst}")
        if self.accounts.get(src, 0) < amount:
            raise InsufficientBalance(f"account {src} holds {self.accounts.get(src, 0)}, needs {amount}")
        self.accounts[src] -= amount
        self.accounts[dst] += amount

    # -- transactions -----------------------------------------------------

    def _execute(self, caller: int, target: int | None, method: str, args, body) -> Receipt:
        with self._lock:
            if caller not in self.accounts or caller in self.contracts:
                raise LedgerError(f"unknown sender {caller}")
            balances = dict(self.accounts)
            snaps = {a: c.snapshot() for a, c in self.contracts.items()}
            next_addr = self._next_address
            meter = GasMeter(self.gas)
            meter.charge("tx_base")
            try:
                result = body(meter)
            except BaseException:
                self.accounts = balances
                for a in list(self.contracts):
                    if a in snaps:
                        self.contracts[a].restore(snaps[a])
                    else:
                        del self.contracts[a]
                self._next_address = next_addr
                raise
            self.height += 1
            receipt = Receipt(
                tx_id=len(self.log), caller=caller, target=target, method=method,
                args=jsonable(list(args)), gas_used=meter.used, gas_items=dict(sorted(meter.items.items())),
                result=jsonable(result), block=self.height,
            )
            self.log.append(receipt)
            return receipt

    def deploy(self, caller: int, contract: Contract) -> Receipt:
        def body(meter):
            meter.charge("deploy")
            addr = self._next_address
            self._next_address += 1
            contract.address = addr
            self.contracts[addr] = contract
            self.accounts[addr] = 0
            return {"address": addr, "kind": contract.kind}

        return self._execute(caller, None, "deploy", [contract.kind], body)

    def transfer(self, caller: int, to: int, amount: int) -> Receipt:
        def body(meter):
            meter.charge("transfer")
            self._move(caller, to, amount)
            return {"amount": amount}

        return self._execute(caller, to, "transfer", [to, amount], body)

    def transact(self, caller: int, address: int, method: str, *args) -> Receipt:
        contract = self._contract(address)
        if method.startswith("_") or method in contract._views or not callable(getattr(contract, method, None)):
            raise LedgerError(f"{contract.kind} has no transaction method {method!r}")

        def body(meter):
            return getattr(contract, method)(Context(self, caller, address, meter), *args)

        return self._execute(caller, address, method, args, body)

    def view(self, caller: int, address: int, method: str, *args):
        """Read-only call: no receipt, no height change, no gas accounting."""
        contract = self._contract(address)
        if method not in contract._views:
            raise LedgerError(f"{contract.kind} has no view {method!r}")
        with self._lock:
            return getattr(contract, method)(Context(self, caller, address, GasMeter(self.gas)), *args)

    def advance_blocks(self, n: int) -> None:
        if n < 0:
            raise ValueError("cannot move the height backwards")
        with self._lock:
            self.height += n

    # -- export -----------------------------------------------------------

    def log_lines(self) -> list[str]:
        return [json.dumps(r.to_dict(), sort_keys=True, separators=(",", ":")) for r in self.log]

    def export_log(self, path: str | Path) -> Path:
        path = Path(path)
        lines = self.log_lines()
        path.write_text("".join(line + "\n" for line in lines))
        return path

    def to_dict(self) -> dict:
        return {
            "gas": self.gas.to_dict(),
            "accounts": {str(a): b for a, b in sorted(self.accounts.items())},
            "height": self.height,
            "total_supply": self.total_supply,
            "next_address": self._next_address,
            "contracts": {str(a): c.to_state() for a, c in sorted(self.contracts.items())},
            "log": [r.to_dict() for r in self.log],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True) + "\n")

    @classmethod
    def from_dict(cls, data: dict, loaders: dict) -> Ledger:
        """Rebuild a ledger. `loaders` maps contract kind -> callable(state) -> Contract."""
        led = cls(GasSchedule.from_dict(data["gas"]))
        led.accounts = {int(a): int(b) for a, b in data["accounts"].items()}
        led.height = data["height"]
        led.total_supply = data["total_supply"]
        led._next_address = data["next_address"]
        for a, st in data["contracts"].items():
            c = loaders[st["kind"]](st)
            c.address = int(a)
            led.contracts[int(a)] = c
        led.log = [Receipt.from_dict(r) for r in data["log"]]
        return led

    @classmethod
    def load(cls, path: str | Path, loaders: dict) -> Ledger:
        return cls.from_dict(json.loads(Path(path).read_text()), loaders)

