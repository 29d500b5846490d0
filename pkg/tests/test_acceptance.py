"""Acceptance criteria at their pinned tolerances.

Each test runs one criterion, prints its PASS/FAIL line, asserts it passed,
and (where the criterion carries one) enforces the runtime budget.
Criterion 10 runs the CLI selftest twice in subprocesses and compares the
reports byte for byte.
"""

import subprocess
import sys
import time

import pytest

from germflow import acceptance as acc


def _run(criterion, budget=None):
    start = time.monotonic()
    result = criterion()
    elapsed = time.monotonic() - start
    status = "PASS" if result.passed else "FAIL"
    print(f"{status} {result.key:>2} {result.name:<24} {result.detail}")
    assert result.passed, result.detail
    if budget is not None:
        assert elapsed < budget, f"criterion {result.key} took {elapsed:.1f}s (budget {budget}s)"


def test_criterion_1_flow_group_law():
    _run(acc.criterion_flow_group_law, budget=10.0)


def test_criterion_2_invariance_identity():
    _run(acc.criterion_invariance_identity)


def test_criterion_3_closed_form_conjugacy():
    _run(acc.criterion_closed_form_conjugacy)


def test_criterion_4_classifier_matrix():
    _run(acc.criterion_classifier_matrix, budget=60.0)


def test_criterion_5_multiplier_preservation():
    _run(acc.criterion_multiplier_preservation)


def test_criterion_6_ac_conditions():
    _run(acc.criterion_ac_conditions)


def test_criterion_7_variation_asymptotics():
    _run(acc.criterion_variation_asymptotics, budget=30.0)


def test_criterion_8_flow_variation_bound():
    _run(acc.criterion_flow_variation_bound)


def test_criterion_9_tan_fixed_points():
    _run(acc.criterion_tan_fixed_points)


def test_criterion_10_selftest_determinism():
    def run_selftest():
        proc = subprocess.run(
            [sys.executable, "-m", "germflow.cli", "selftest"],
            capture_output=True,
            timeout=600,
        )
        assert proc.returncode == 0, proc.stdout.decode() + proc.stderr.decode()
        return proc.stdout

    first = run_selftest()
    second = run_selftest()
    ok = first == second and b"FAIL" not in first
    print(f"{'PASS' if ok else 'FAIL'} 10 determinism               two selftest runs byte-identical")
    assert first == second
    assert b"FAIL" not in first
