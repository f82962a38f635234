import numpy as np
import pytest
from hypothesis import strategies as st

from slsim.opinion import Opinion

TOL = 1e-9

_unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False, allow_infinity=False)


@st.composite
def opinions(draw, base_rate=None):
    b = draw(_unit)
    d = draw(st.floats(min_value=0.0, max_value=1.0 - b, allow_nan=False))
    u = max(0.0, 1.0 - b - d)
    a = draw(_unit) if base_rate is None else base_rate
    return Opinion(b, d, u, a)


def assert_on_simplex(op, tol=TOL):
    assert -tol <= op.b <= 1 + tol
    assert -tol <= op.d <= 1 + tol
    assert -tol <= op.u <= 1 + tol
    assert abs(op.b + op.d + op.u - 1.0) <= tol


def random_opinions(n, seed):
    """``n`` opinions spread uniformly over the simplex (Dirichlet(1,1,1))."""
    rng = np.random.default_rng(seed)
    masses = rng.dirichlet([1.0, 1.0, 1.0], size=n)
    rates = rng.random(n)
    return [Opinion(*m, a) for m, a in zip(masses, rates)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# Acceptance criteria register one line each; printed after the run.
ACCEPTANCE_LINES: list[str] = []


class _Criterion:
    def __init__(self, label):
        self.label = label
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            status = "PASS"
        elif issubclass(exc_type, pytest.skip.Exception):
            status = "SKIP"
        else:
            status = "FAIL"
        line = f"[{status}] {self.label}"
        if self.detail:
            line += f" -- {self.detail}"
        ACCEPTANCE_LINES.append(line)
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
