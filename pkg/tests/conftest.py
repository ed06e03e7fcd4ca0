import numpy as np
import pytest

from acceptance_log import RESULTS


def random_instances(n=50, d=6, seed=0):
    """Mix of dense and sparse non-negative matrices, half of them scaled up."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n):
        A = rng.random((d, d)) * rng.choice([0, 1], size=(d, d), p=[0.3, 0.7])
        if k % 2:
            A = 2 * A
        out.append(A)
    return out


@pytest.fixture(scope="session")
def instances():
    return random_instances()


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        ok, line = RESULTS[key]
        terminalreporter.write_line(f"[{key:2d}] {'PASS' if ok else 'FAIL'}  {line}")
