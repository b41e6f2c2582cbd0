import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=40, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

from openchain.checks import draw_model  # noqa: E402
from openchain.bethe import SolverConfig, solve_bethe  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def model2():
    """A random constrained L=2 model with its triangular form."""
    return draw_model(np.random.default_rng(12), 2)


@pytest.fixture(scope="session")
def model3():
    return draw_model(np.random.default_rng(13), 3)


@pytest.fixture(scope="session")
def onshell2(model2):
    """First N=2 Bethe state of ``model2``."""
    states = solve_bethe(2, model2.params, model2.right_tri, model2.left_tri, SolverConfig(starts=200, seed=3))
    assert states, states.diagnostics
    return states[0]


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record and print one pass/fail line for an acceptance criterion, then assert it."""

    def _verdict(number, label, value, tol, ok=None, extra=""):
        ok = bool(value <= tol) if ok is None else bool(ok)
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {label}: {value:.3e} (tol {tol:.0e}){extra}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return _verdict


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
