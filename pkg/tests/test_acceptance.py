"""The twelve acceptance criteria at their stated tolerances.

Each test prints one PASS/FAIL line; the lines are also collected into the
terminal summary.  Criterion 12 runs the command line twice in fresh
processes and compares the reports byte for byte.
"""
import subprocess
import sys

import pytest

from g2algebra import acceptance
from g2algebra.rng import DEFAULT_SEED, spawn

STREAMS = dict(zip(range(1, 12), spawn(DEFAULT_SEED, 11)))


def _record(log, result):
    line = result.line()
    print(line)
    log.append(line)
    assert result.passed, line


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number, acceptance_log):
    check = acceptance.CRITERIA[number - 1]
    _record(acceptance_log, check(STREAMS[number]))


def test_criterion_12_determinism(acceptance_log, tmp_path):
    cmd = [sys.executable, "-m", "g2algebra.cli", "verify-all", "--seed", "20220101"]
    runs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
    assert all(r.returncode == 0 for r in runs), runs[0].stdout.decode()
    out = runs[0].stdout.decode().splitlines()
    assert len(out) == acceptance.N_CRITERIA
    same = runs[0].stdout == runs[1].stdout
    result = acceptance.CriterionResult(12, "determinism: verify-all output byte-identical across two runs",
                                        0.0 if same else 1.0, same, f"{len(runs[0].stdout)} bytes")
    _record(acceptance_log, result)
