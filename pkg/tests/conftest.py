import numpy as np
import pytest

from qmatops import kernels

GOLDEN_A1 = np.array([[0.4, 0.4], [0.2, 0.8]])
GOLDEN_A2 = np.array([[0.4, 0.2], [0.4, 0.8]])
GOLDEN_PRODUCT = np.array([[0.32, 0.40], [0.40, 0.68]])


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    """Run a test once per built kernel backend."""
    previous = kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_state_amps(rng, q):
    v = rng.normal(size=1 << q) + 1j * rng.normal(size=1 << q)
    return v / np.linalg.norm(v)


def random_complex(rng, shape, real=False):
    z = rng.normal(size=shape)
    if not real:
        z = z + 1j * rng.normal(size=shape)
    return z


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
