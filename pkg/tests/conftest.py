from fractions import Fraction as F

import pytest
from hypothesis import settings

from onlinend import problems as P
from onlinend.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# triangle a=0, b=1, c=2: e0 = ab (5), e1 = ac (2), e2 = cb (2)
A, B, C = 0, 1, 2


def triangle(kind=P.STEINER_FOREST, root=None):
    g = Graph.build(3, [(A, B, 5), (A, C, 2), (C, B, 2)])
    return P.ProblemInstance(kind, g, root)


def star(spokes=5, cost=4):
    """Centre 0 with ``spokes`` leaves, every edge of the same cost."""
    g = Graph.build(spokes + 1, [(0, i, cost) for i in range(1, spokes + 1)])
    return P.ProblemInstance(P.STEINER_FOREST, g)


def path_fl(costs=(3, 3, 3), weights=(1, 1)):
    """Facility location on a path of len(costs) nodes."""
    n = len(costs)
    edges = [(i, i + 1, 0) for i in range(n - 1)]
    g = Graph.build(n, edges, node_costs=list(costs), edge_weights=list(weights))
    return P.ProblemInstance(P.FACILITY_LOCATION, g)


@pytest.fixture
def T():
    return triangle()


@pytest.fixture
def AB():
    return P.SteinerPair(A, B)


def fr(x):
    return F(x)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
