import numpy as np
import pytest

from epdyn.model import PAPER_PARAMS, ModelParams


@pytest.fixture
def paper():
    return PAPER_PARAMS


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def draw_params(rng):
    """Random model with weakly decaying bare levels and moderate coupling."""
    u = rng.uniform
    return ModelParams(
        omega1=u(0.5, 2.0) + 1j * u(-0.02, 0.0),
        omega2=u(0.5, 2.0) + 1j * u(-0.02, 0.0),
        epsilon1=u(-1, 1) + 1j * u(-0.005, 0.005),
        epsilon2=u(-1, 1) + 1j * u(-0.005, 0.005),
        delta=u(-0.05, 0.05) + 1j * u(-0.05, 0.05),
    )


def draw_lambda(rng):
    return rng.uniform(0, 1) + 1j * rng.uniform(-0.02, 0.02)


def draw_state(rng):
    return rng.normal(size=2) + 1j * rng.normal(size=2)


@pytest.fixture
def draws():
    """Namespace of random draw helpers (params, lambda, state)."""

    class Draws:
        params = staticmethod(draw_params)
        lam = staticmethod(draw_lambda)
        state = staticmethod(draw_state)

    return Draws


_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(label, ok, detail)`` then assert."""

    def record(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else "")
        _CRITERIA.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
