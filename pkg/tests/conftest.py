import math

import numpy as np
import pytest

from giant_anatomy import stats
from giant_anatomy.graph import MultiGraph


def bisect_conjugate(lam, iters=200):
    """Independent oracle: plain bisection for m*exp(-m) = lam*exp(-lam)."""
    target = lam * math.exp(-lam)
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid * math.exp(-mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def theta_graph():
    # vertices 0 and 1 joined by paths of 2, 2 and 3 edges
    edges = [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 5), (5, 1)]
    return MultiGraph(6, edges)


def cycle_graph(k):
    return MultiGraph(k, [(i, (i + 1) % k) for i in range(k)])


def path_graph(k):
    return MultiGraph(k, [(i, i + 1) for i in range(k - 1)])


def random_multigraph(rng, n, m, loops=True):
    e = rng.integers(0, n, size=(m, 2))
    if not loops:
        e = e[e[:, 0] != e[:, 1]]
    return MultiGraph(n, e)


# Large Monte-Carlo datasets shared by several test modules.
N_BIG = 100_000
REPS_BIG = 200


@pytest.fixture(scope="session")
def contiguous_dataset():
    return stats.monte_carlo(stats.SamplerSpec("contiguous", N_BIG, 2.0), REPS_BIG, base_seed=11)


@pytest.fixture(scope="session")
def contiguous_simple_dataset():
    return stats.monte_carlo(stats.SamplerSpec("contiguous", N_BIG, 2.0, simple=True),
                             REPS_BIG, base_seed=1)


@pytest.fixture(scope="session")
def direct_dataset():
    return stats.monte_carlo(stats.SamplerSpec("direct", N_BIG, 2.0), REPS_BIG,
                             base_seed=1 + 1_000_003)


ACCEPTANCE_LINES = []


@pytest.fixture
def report_line():
    def record(criterion, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        print(ACCEPTANCE_LINES[-1])
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
