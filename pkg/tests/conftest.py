import mpmath
import numpy as np
import pytest


def series_oracle(x, order, dps=60):
    """J_order(x) from the power series evaluated in extended precision."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        half = x / 2
        term = half**order / mpmath.factorial(order)
        total = term
        k = 0
        while True:
            k += 1
            term = -term * half * half / (k * (k + order))
            total += term
            if abs(term) < mpmath.mpf(10) ** (-dps + 5) and k > x:
                break
        return float(total)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
