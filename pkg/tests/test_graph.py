import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from onlinend.errors import ConfigurationError, InputError
from onlinend.graph import (Graph, components, distance_matrix, is_pair_connected, max_disjoint_paths,
                            shortest_dist)


def test_build_rejects_bad_edges():
    with pytest.raises(InputError):
        Graph.build(2, [(0, 0, 1)])
    with pytest.raises(InputError):
        Graph.build(2, [(0, 2, 1)])
    with pytest.raises(InputError):
        Graph.build(2, [(0, 1, -1)])


def test_node_costs_as_list_or_dict():
    g1 = Graph.build(3, [(0, 1, 0)], node_costs=[1, 2, 3])
    g2 = Graph.build(3, [(0, 1, 0)], node_costs={0: 1, 1: 2, 2: 3})
    assert g1.node_costs == g2.node_costs == {0: 1, 1: 2, 2: 3}
    with pytest.raises(InputError):
        Graph.build(3, [(0, 1, 0)], node_costs={0: 1})


def test_components_label_is_smallest_node():
    g = Graph.build(5, [(3, 4, 1), (1, 2, 1), (0, 1, 1)])
    assert components(g, [0, 1]) == [0, 1, 1, 3, 3]
    assert components(g, []) == [0, 1, 2, 3, 4]


def test_directed_reachability_respects_direction():
    g = Graph.build(3, [(0, 1, 1), (1, 2, 1)], directed=True)
    assert is_pair_connected(g, [0, 1], 0, 2)
    assert not is_pair_connected(g, [0, 1], 2, 0)
    assert is_pair_connected(g, [0, 1], 2, 0, respect_direction=False)


def test_shortest_dist_needs_weights():
    g = Graph.build(3, [(0, 1, 0), (1, 2, 0), (0, 2, 0)], edge_weights=[1, 1, 5])
    assert shortest_dist(g, 0, 2) == 2
    assert distance_matrix(g)[2][0] == 2
    with pytest.raises(ConfigurationError):
        shortest_dist(Graph.build(2, [(0, 1, 1)]), 0, 1)


def test_disjoint_paths_triangle():
    g = Graph.build(3, [(0, 1, 5), (0, 2, 2), (2, 1, 2)])
    assert max_disjoint_paths(g, [0, 1, 2], 0, 1) == 2
    assert max_disjoint_paths(g, [0, 1], 0, 1) == 1
    assert max_disjoint_paths(g, [1], 0, 1) == 0


def test_disjoint_paths_parallel_edges_count_separately():
    g = Graph.build(2, [(0, 1, 1), (0, 1, 1), (1, 0, 1)])
    assert max_disjoint_paths(g, [0, 1, 2], 0, 1) == 3


def _brute_disjoint(g, ids, u, v):
    """Largest family of pairwise edge-disjoint simple u-v paths, by enumeration."""
    paths = []

    def walk(x, seen, used):
        if x == v:
            paths.append(frozenset(used))
            return
        for i in ids:
            e = g.edges[i]
            for a, b in ((e.tail, e.head), (e.head, e.tail)) if not g.directed else ((e.tail, e.head),):
                if a == x and b not in seen and i not in used:
                    walk(b, seen | {b}, used | {i})

    walk(u, {u}, frozenset())
    best = 0
    for r in range(1, len(paths) + 1):
        for combo in itertools.combinations(paths, r):
            if all(not (p & q) for p, q in itertools.combinations(combo, 2)):
                best = r
                break
    return best


@st.composite
def small_graphs(draw, directed=False):
    n = draw(st.integers(2, 5))
    m = draw(st.integers(1, 6))
    edges = []
    for _ in range(m):
        u = draw(st.integers(0, n - 1))
        v = draw(st.integers(0, n - 1).filter(lambda x: x != u))
        edges.append((u, v, 1))
    return Graph.build(n, edges, directed=directed)


@given(small_graphs(), st.data())
def test_max_flow_matches_path_enumeration(g, data):
    u = data.draw(st.integers(0, g.node_count - 1))
    v = data.draw(st.integers(0, g.node_count - 1).filter(lambda x: x != u))
    ids = list(range(g.edge_count))
    assert max_disjoint_paths(g, ids, u, v) == _brute_disjoint(g, ids, u, v)


@given(small_graphs(directed=True), st.data())
def test_directed_max_flow_matches_path_enumeration(g, data):
    u = data.draw(st.integers(0, g.node_count - 1))
    v = data.draw(st.integers(0, g.node_count - 1).filter(lambda x: x != u))
    ids = list(range(g.edge_count))
    assert max_disjoint_paths(g, ids, u, v) == _brute_disjoint(g, ids, u, v)


@given(small_graphs(), st.data())
def test_connectivity_agrees_with_components(g, data):
    ids = data.draw(st.sets(st.integers(0, g.edge_count - 1)))
    lab = components(g, ids)
    for u in range(g.node_count):
        for v in range(g.node_count):
            assert (lab[u] == lab[v]) == is_pair_connected(g, ids, u, v)
