"""The command-line interface, driven through subprocesses."""

from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from zkoffload.harness.config import DEFAULT_KEYS_DIR
from zkoffload.snark import load_proof

CLI = [sys.executable, "-m", "zkoffload.harness.cli"]


def run(*args, check=True):
    proc = subprocess.run([*CLI, *map(str, args)], capture_output=True, text=True, timeout=600)
    if check:
        assert proc.returncode == 0, proc.stderr
    return proc


def last_json(proc) -> dict:
    return json.loads(proc.stdout.strip().splitlines()[-1])


def test_help():
    proc = run("--help")
    for group in ("keys", "task", "provider", "consumer", "bench"):
        assert group in proc.stdout
    assert "--fault" in run("provider", "run", "--help").stdout
    assert run("teleport", check=False).returncode == 2


@pytest.mark.skipif(shutil.which("zkoffload") is None, reason="console script not installed")
def test_console_script():
    assert subprocess.run(["zkoffload", "--help"], capture_output=True).returncode == 0


def test_keys_setup(keys):
    keys.get(1, 10)  # warm the cache
    out = last_json(run("keys", "setup", "--map", 1, "--tier", 10, "--keys-dir", DEFAULT_KEYS_DIR))
    assert out["digest"] == keys.get(1, 10).cs.digest().hex()
    assert run("keys", "setup", "--map", 1, check=False).returncode == 2


def test_task_provider_consumer_round_trip(tmp_path, keys):
    keys.get(1, 10)
    state, log = tmp_path / "state.json", tmp_path / "log.jsonl"
    common = ["--state", state, "--keys-dir", DEFAULT_KEYS_DIR]
    created = last_json(run("task", "create", *common, "--map", 1, "--cities", "3,7,12,19,25",
                            "--stake", 60, "--min-duration", 2))
    broker = created["broker"]
    assert created["task"]["cities"] == [3, 7, 12, 19, 25]

    early = run("consumer", "run", *common, "--broker", broker, check=False)
    assert early.returncode == 0  # the consumer waits out the minimum duration itself

    created = last_json(run("task", "create", *common, "--map", 1, "--size", 6))
    broker = created["broker"]
    proof_path = tmp_path / "p.proof"
    report = last_json(run("provider", "run", *common, "--broker", broker, "--fault", "corrupt-sum",
                           "--proof-out", proof_path))
    assert (report["status"], report["attempts"]) == ("accepted", 2)
    assert load_proof(proof_path) is not None

    bad = last_json(run("provider", "run", *common, "--broker", broker, "--fault", "decouple-hash"))
    assert bad["status"] == "discarded"

    closed = last_json(run("consumer", "run", *common, "--broker", broker, "--log", log))
    assert closed["status"] == "solved" and closed["valid"] is True
    assert closed["provider_balance"] == 100
    lines = log.read_text().splitlines()
    assert json.loads(lines[-1])["method"] == "end_task"

    again = run("consumer", "run", *common, "--broker", broker, check=False)
    assert again.returncode == 1 and "error" in again.stderr


def test_bench_sweep_small(tmp_path, keys):
    keys.get(1, 10)
    out, log = tmp_path / "b.csv", tmp_path / "b.jsonl"
    proc = run("bench", "sweep", "--keys-dir", DEFAULT_KEYS_DIR, "--sizes", "3,5",
               "--out", out, "--log", log)
    summary = last_json(proc)["summary"]
    assert summary["problems"] == [] and summary["rows"] == 6
    assert out.read_text().count("\n") == 7
