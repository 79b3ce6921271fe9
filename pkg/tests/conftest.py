import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st
from hypothesis.extra.numpy import arrays

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
vectors = arrays(np.float64, 7, elements=finite)
seeds = st.integers(min_value=0, max_value=2**64 - 1)


@st.composite
def skew_matrices(draw):
    a = draw(arrays(np.float64, (7, 7), elements=finite))
    return a - a.T


@st.composite
def unit_vectors(draw):
    v = draw(vectors)
    n = np.linalg.norm(v)
    if n < 1e-3:
        v = np.eye(7)[draw(st.integers(0, 6))]
        n = 1.0
    return v / n


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def E():
    return np.eye(7)


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_LINES, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
