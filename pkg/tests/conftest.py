import numpy as np
import pytest

from tfprecoding.channel import PowerDelayProfile


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_sparse_pdp(rng, max_len, n_taps=None):
    """Random PDP with a tap at 0, strictly increasing delays below ``max_len``."""
    if n_taps is None:
        n_taps = int(rng.integers(1, min(max_len, 8) + 1))
    extra = rng.choice(np.arange(1, max_len), size=n_taps - 1, replace=False) if n_taps > 1 else []
    delays = np.sort(np.concatenate([[0], extra])).astype(int)
    return PowerDelayProfile(delays, rng.uniform(0.1, 1.0, delays.size)).normalized()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
