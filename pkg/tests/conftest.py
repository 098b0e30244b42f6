import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fiedlersys import MatrixPoly, StateSpaceSystem

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

EPS = np.finfo(float).eps


def cnormal(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def scalar_sys():
    """n = r = 1, P = z^2, B = C = D = 1; det S = -z^2 - 1."""
    return StateSpaceSystem(MatrixPoly([[[0]], [[0]], [[1]]]), [[1]], [[1]], [[1]])


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
