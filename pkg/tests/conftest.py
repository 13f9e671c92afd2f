import math
import sys

import numpy as np
import pytest

from abelmix.group_core import make_group, make_walk


def cyclic(n, *gens):
    return make_walk(make_group([n]), list(gens))


def hypercube(d):
    return make_walk(make_group([2] * d), [[int(i == j) for i in range(d)] for j in range(d)])


@pytest.fixture
def z4():
    return cyclic(4, 1)


@pytest.fixture
def z8():
    return cyclic(8, 1)


@pytest.fixture
def klein():
    return make_walk(make_group([2, 2]), [(1, 0), (0, 1)])


def matrix_power_distance(walk, t):
    """|e_0 P^t - U|_1 from explicit matrix powers (oracle)."""
    from abelmix.group_core import transition_matrix

    P = transition_matrix(walk)
    row = np.linalg.matrix_power(P, t)[0]
    return float(np.abs(row - 1.0 / walk.group.order).sum())


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance lines (one per criterion) at the end of the run."""
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, detail = results[number]
        terminalreporter.write_line(mod._line(number, ok, detail))
