"""Provider and consumer flows, fault injection, config and the sweep."""

from __future__ import annotations

import json
import random

import pytest

from zkoffload.harness import (
    FAULTS,
    BenchmarkRow,
    Network,
    ScenarioConfig,
    check_invariants,
    close_task,
    create_task,
    crossover,
    instance_for,
    run_benchmark,
    run_consumer,
    run_provider,
    tamper,
)
from zkoffload.ledger import LedgerError, WrongState
from zkoffload.tsp import TaskSpec, validate_tour

EIGHT = TaskSpec(1, (2, 5, 9, 12, 17, 21, 26, 30))


@pytest.fixture
def net(maps, keys):
    return Network(maps, keys)


def provider_run(net, task, **kw):
    consumer, provider = net.open_account(100), net.open_account(0)
    broker, _ = create_task(net, consumer, task, stake=40, verify_flag=kw.pop("verify_flag", True), min_duration=1)
    out = run_provider(net, provider, broker, **kw)
    return consumer, provider, broker, out


def submits(net) -> int:
    return sum(r.method.startswith("submit") for r in net.ledger.log)


def test_honest_eight_city_run(net, map1):
    consumer, provider, broker, out = provider_run(net, EIGHT)
    assert out.status == "accepted" and out.attempts == 1
    assert out.proof_ms > out.witness_ms > 0
    assert validate_tour(map1, EIGHT.cities, out.tour)
    closed = close_task(net, consumer, broker)
    assert closed.status == "solved" and closed.valid
    assert net.ledger.balance(provider) == 40
    assert check_invariants(net) == []


def test_corrupt_sum_retries_then_accepts(net):
    *_, out = provider_run(net, EIGHT, fault="corrupt-sum")
    assert (out.status, out.attempts) == ("accepted", 2)


@pytest.mark.parametrize("fault", ["corrupt-sum", "corrupt-path"])
def test_persistent_fault_aborts(net, fault):
    *_, out = provider_run(net, EIGHT, fault=fault, persistent=True)
    assert (out.status, out.attempts, out.receipt) == ("aborted", 2, None)
    assert submits(net) == 0


@pytest.mark.parametrize("fault", ["corrupt-proof", "decouple-hash"])
def test_submission_faults_discarded(net, fault):
    consumer, _, broker, out = provider_run(net, EIGHT, fault=fault)
    assert out.status == "discarded"
    assert out.receipt.result["reason"] in ("proof rejected", "path hash mismatch")
    if fault == "decouple-hash":
        assert out.receipt.result["reason"] == "path hash mismatch"
    assert net.ledger.contract(broker).solutions == []
    assert close_task(net, consumer, broker).status == "refunded"


def test_other_variants(net):
    *_, out = provider_run(net, EIGHT, variant="unverified", verify_flag=False)
    assert out.status == "accepted" and out.witness_ms is None
    *_, out = provider_run(net, EIGHT, variant="onchain", verify_flag=False)
    assert out.status == "accepted"
    with pytest.raises(WrongState):
        provider_run(net, EIGHT, variant="unverified", verify_flag=True)
    with pytest.raises(ValueError):
        provider_run(net, EIGHT, variant="teleport", verify_flag=False)
    with pytest.raises(ValueError):
        provider_run(net, EIGHT, fault="flip-bits")


def test_tamper_kinds(net, map1):
    from zkoffload.harness import build_submission
    from zkoffload.tsp import solve_exact

    sub, _ = build_submission(net, EIGHT, solve_exact(map1, EIGHT.cities), blinding_seed=b"t")
    rng = random.Random(0)
    for kind in FAULTS:
        for _ in range(5):
            bad = tamper(sub, kind, rng)
            assert bad != sub
    assert tamper(sub, "decouple-hash", rng).hash_of_path == sub.hash_of_path
    with pytest.raises(ValueError):
        tamper(sub, "nope", rng)


def test_consumer_flows(net, map1):
    consumer = net.open_account(100)
    provider = net.open_account(0)
    out = run_consumer(net, consumer, EIGHT, stake=30,
                       providers=[lambda b: run_provider(net, provider, b, seed=4)])
    assert out.status == "solved" and out.valid
    assert validate_tour(map1, EIGHT.cities, out.tour)
    assert [p.status for p in out.providers] == ["accepted"]
    assert net.ledger.balance(provider) == 30

    refund = run_consumer(net, consumer, EIGHT, stake=30)
    assert refund.status == "refunded" and refund.tour is None
    assert net.ledger.balance(consumer) == 70

    broker, _ = create_task(net, consumer, EIGHT, stake=5, verify_flag=True, min_duration=0)
    with pytest.raises(LedgerError):
        net.ledger.view(consumer, broker, "retrieve_solution")
    assert check_invariants(net) == []


# -- config -----------------------------------------------------------------

def test_default_config(config):
    assert sorted(config.maps) == [1, 2]
    assert config.registry().get(2).n == 70
    assert max(config.sizes[1]) == 30 and max(config.sizes[2]) == 60


def test_config_validation(tmp_path, config):
    base = {"maps": {"1": "map30.json"}, "sizes": {"1": [3]}}
    ScenarioConfig.from_dict(base)
    for bad in [dict(base, modes=["fast"]), dict(base, tiers=[15]), dict(base, sizes={"1": [61]}),
                dict(base, sizes={"3": [4]}), dict(base, maps={"1": str(tmp_path / "missing.json")}),
                dict(base, gas_schedule=str(tmp_path / "nope.json"))]:
        with pytest.raises(ValueError):
            ScenarioConfig.from_dict(bad)
    with pytest.raises(ValueError):
        ScenarioConfig.from_dict({"maps": {"1": "map30.json"}, "sizes": {"1": [45]}}).registry()
    with pytest.raises(ValueError):
        ScenarioConfig.from_dict({"maps": {"2": "map30.json"}}).registry()
    path = tmp_path / "c.json"
    path.write_text(json.dumps(dict(base, csv="out.csv")))
    assert ScenarioConfig.load(path).csv_path == tmp_path / "out.csv"


# -- benchmark ---------------------------------------------------------------

def test_benchmark_row_invariants():
    with pytest.raises(ValueError):
        BenchmarkRow(3, 1, "verified", 10, 0, 1.0, 2.0)
    with pytest.raises(ValueError):
        BenchmarkRow(3, 1, "verified", 10, 5, -1.0, 2.0)


def test_crossover_on_synthetic_rows():
    def rows(pairs):
        out = []
        for s, (on, ver) in enumerate(pairs, start=1):
            out += [BenchmarkRow(s, 1, "onchain", 10, on, None, None), BenchmarkRow(s, 1, "verified", 10, ver, 1, 2)]
        return out

    c = crossover(rows([(1, 5), (3, 5), (6, 5), (8, 5)]))
    assert (c["first"], c["stable"], c["onchain_cheaper_below_first"]) == (3, 3, True)
    c = crossover(rows([(1, 5), (6, 5), (4, 5), (8, 5)]))
    assert (c["first"], c["stable"]) == (2, 4)
    assert crossover(rows([(1, 5), (2, 5)]))["first"] is None


def test_instance_for_is_deterministic():
    a = instance_for(2, 70, 33, seed=1)
    assert a == instance_for(2, 70, 33, seed=1) and len(a.cities) == 33 and a.tier == 40
    assert a != instance_for(2, 70, 33, seed=2)


def test_small_sweep(keys, tmp_path):
    cfg = ScenarioConfig.from_dict({"maps": {"1": "map30.json"}, "sizes": {"1": [3, 11]},
                                    "csv": str(tmp_path / "b.csv"), "log": str(tmp_path / "b.jsonl")})
    res = run_benchmark(cfg, keys)
    assert res.problems == []
    assert len(res.rows) == 6
    gas = {(r.size, r.variant): r.gas_used for r in res.rows}
    assert gas[(3, "verified")] < gas[(11, "verified")]
    assert gas[(3, "onchain")] < gas[(11, "onchain")]
    assert gas[(3, "unverified")] < gas[(11, "unverified")]
    assert all(r.witness_time_ms < r.proof_time_ms for r in res.rows if r.variant == "verified")
    text = (tmp_path / "b.csv").read_text()
    assert text == res.csv_text() and text.startswith("size,map,variant,tier,gas_used")
    assert (tmp_path / "b.jsonl").read_text().splitlines() == res.log_lines
