import numpy as np
import pytest

from symclose.subspace import Subspace, span


def random_subspace(rng, n, k):
    """Haar-ish random k-dimensional subspace of R^n."""
    if k == 0:
        return Subspace(n, np.zeros((0, n)))
    return span(rng.standard_normal((k, n)), n)


def random_unit(rng, n):
    x = rng.standard_normal(n)
    return x / np.linalg.norm(x)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
