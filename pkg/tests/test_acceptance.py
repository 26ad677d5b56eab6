"""Acceptance gate: the seven numbered experiments plus the determinism rerun.

Each criterion test runs its experiment through the CLI `accept` subcommand
(the documented single-invocation path), asserts the gate, and prints one
PASS/FAIL line.  Criterion 8 reruns everything with --threads 1 and
--threads 8 and compares the report files byte for byte; the --threads 1
reports double as the reports asserted by criteria 1-7, so the whole suite
performs exactly two full acceptance passes.
"""

import json
import time

import pytest

from spherelab.cli import run

BUDGETS = {1: 60, 2: 120, 3: 60, 4: 120, 5: 30, 6: 120, 7: 1}


@pytest.fixture(scope="session")
def accept_reports(tmp_path_factory):
    base = tmp_path_factory.mktemp("accept")
    reports = {}
    for number in range(1, 8):
        out = base / f"exp{number}-t1.json"
        start = time.perf_counter()
        code = run(
            ["accept", "--experiment", str(number), "--threads", "1", "--out", str(out)]
        )
        elapsed = time.perf_counter() - start
        reports[number] = {
            "exit_code": code,
            "bytes": out.read_bytes(),
            "payload": json.loads(out.read_text()),
            "elapsed": elapsed,
        }
    return reports


@pytest.mark.parametrize("number", range(1, 8))
def test_criterion(number, accept_reports):
    rep = accept_reports[number]
    payload = rep["payload"]
    status = "PASS" if payload["passed"] else "FAIL"
    print(f"{status}  criterion {number}: {payload['name']} "
          f"({rep['elapsed']:.1f}s, budget {BUDGETS[number]}s)")
    assert rep["exit_code"] == 0, payload
    assert payload["passed"], payload
    assert rep["elapsed"] < BUDGETS[number]


def test_criterion_8_determinism(accept_reports, tmp_path):
    mismatches = []
    for number in range(1, 8):
        out = tmp_path / f"exp{number}-t8.json"
        code = run(
            ["accept", "--experiment", str(number), "--threads", "8", "--out", str(out)]
        )
        assert code == 0
        if out.read_bytes() != accept_reports[number]["bytes"]:
            mismatches.append(number)
    status = "PASS" if not mismatches else "FAIL"
    print(f"{status}  criterion 8: byte-identical reports for --threads 1 vs 8")
    assert not mismatches, f"non-deterministic experiments: {mismatches}"
