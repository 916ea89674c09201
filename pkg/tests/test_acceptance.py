"""Acceptance gate: every criterion of the verification suite, one test each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the pass/fail
line per criterion; the same checks back ``permsep selftest``.
"""

import pytest

from permsep.selftest import CHECK_NAMES, DEFAULT_SEED, run_checks


@pytest.mark.parametrize("name", CHECK_NAMES)
def test_acceptance(name):
    result = run_checks([name], seed=DEFAULT_SEED)[0]
    status = "PASS" if result.passed else "FAIL"
    print(f"[{status}] {result.name} ({result.seconds:.2f}s): {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"
