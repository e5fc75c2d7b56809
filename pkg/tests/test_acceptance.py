"""Acceptance criteria 1-11 at their stated tolerances, one test each.

Each test prints a single PASS/FAIL line; the lines are also collected and
repeated in the pytest terminal summary.
"""
import pytest

from localenergy import checks

RESULTS = []


@pytest.mark.parametrize("check", checks.ALL_CHECKS, ids=lambda c: f"criterion{c.number:02d}_{c.__name__[6:]}")
def test_criterion(check):
    result = check(quick=False)
    RESULTS.append(result.line)
    print(result.line)
    assert result.passed, result.line
