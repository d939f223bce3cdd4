import numpy as np
import pytest

from ptfano import build_model_a, build_model_b, build_model_b_pt, build_model_c

EDGE = 1 - 1e-6


def band_grid(J=0.5, steps=2001, margin=1e-6):
    a = 2 * abs(J) * (1 - margin)
    return np.linspace(-a, a, steps)


# non-balanced preset parameter sets fig5a-d (J = 0.5)
FIG5 = {
    "a": (0.5, 0.4, 0.4, 0.4, 0.4, 0.05, -0.15, 0.0),
    "b": (0.5, 0.4, 0.4, 0.4, -0.5, 0.05, -0.05, 0.0),
    "c": (0.5, 0.4, 0.6, 0.4, 0.4, 0.05, -0.05, 0.0),
    "d": (0.5, 0.4, 0.6, 0.4, -0.5, 0.05, -0.15, 0.0),
}


@pytest.fixture
def fig3_model():
    return lambda gamma: build_model_a(0.5, 0.3, 0.5, gamma)


@pytest.fixture
def fig4_model():
    return lambda gamma, J_perp=0.0: build_model_b_pt(0.5, 0.4, 0.5, gamma, J_perp)


@pytest.fixture
def fig6_model():
    return lambda gamma: build_model_c(0.5, 0.3, 0.2, gamma)


@pytest.fixture(params=sorted(FIG5))
def fig5_model(request):
    return build_model_b(*FIG5[request.param])


_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance verdict; printed again in the terminal summary."""
    def record(number, title, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number} ({title}): {detail}"
        request.config.stash[_RESULTS][number] = line
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_RESULTS]
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
