import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from onlinend import problems as P
from onlinend.errors import InputError
from onlinend.graph import Graph, is_pair_connected

from conftest import A, B, C, path_fl, triangle


def test_triangle_examples():
    assert P.satisfies(triangle(), P.SteinerPair(A, B), {1, 2})
    assert not P.satisfies(triangle(), P.SteinerPair(A, B), {1})
    assert P.satisfies(triangle(P.MULTICUT), P.MulticutPair(A, B), {0, 1})
    net = triangle(P.STEINER_NETWORK)
    assert P.satisfies(net, P.SteinerNetworkPair(A, B, 2), {0, 1, 2})
    assert not P.satisfies(net, P.SteinerNetworkPair(A, B, 2), {0, 1})


def test_node_weighted_needs_terminals_in_chosen():
    g = Graph.build(3, [(0, 1, 0), (1, 2, 0)], node_costs=[1, 1, 1])
    inst = P.ProblemInstance(P.NODE_WEIGHTED, g)
    assert P.satisfies(inst, P.NodeWeightedPair(0, 2), {0, 1, 2})
    assert not P.satisfies(inst, P.NodeWeightedPair(0, 2), {0, 2})
    assert not P.satisfies(inst, P.NodeWeightedPair(0, 1), {1})


def test_directed_root_path():
    g = Graph.build(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)], directed=True)
    inst = P.ProblemInstance(P.DIRECTED_STEINER, g, 0)
    assert P.satisfies(inst, P.DirectedRootPath(2), {0, 1})
    assert not P.satisfies(inst, P.DirectedRootPath(2), {2})


def test_kind_mismatch_is_an_input_error():
    with pytest.raises(InputError):
        P.satisfies(triangle(), P.MulticutPair(A, B), set())
    with pytest.raises(InputError):
        P.satisfies(triangle(), P.SteinerPair(A, 7), set())
    with pytest.raises(InputError):
        P.satisfies(path_fl(), P.FacilityRequest(0), set())


def test_fl_solution_cost_examples():
    inst = path_fl(costs=(1, 10), weights=(1,))
    u, v = 0, 1
    reqs = {0: P.FacilityRequest(v)}
    assert P.fl_solution_cost(inst, P.FLSolution({u}, {0: u}), reqs) == 2
    assert P.fl_solution_cost(inst, P.FLSolution({v}, {0: v}), reqs) == 10
    two = {0: P.FacilityRequest(v), 1: P.FacilityRequest(v)}
    assert P.fl_solution_cost(inst, P.FLSolution({u}, {0: u, 1: u}), two) == 3
    with pytest.raises(InputError):
        P.FLSolution({u}, {0: v})


def test_validate_instance_examples():
    assert P.validate_instance(triangle(), [P.SteinerPair(A, B)]) == []
    g = Graph.build(2, [(0, 1, 1)], directed=True)
    assert "missing root" in P.validate_instance(P.ProblemInstance(P.DIRECTED_STEINER, g))
    g = Graph.build(2, [(0, 1, 0)], node_costs=[1, 1])
    assert "missing weights" in P.validate_instance(P.ProblemInstance(P.FACILITY_LOCATION, g))
    bad = P.validate_instance(triangle(P.STEINER_TREE, root=0), [P.SteinerPair(B, C)])
    assert any("root" in m for m in bad)


def test_payload_dict_round_trip():
    for p in (P.SteinerPair(0, 1), P.SteinerSubset((0, 1, 2)), P.SteinerNetworkPair(0, 1, 2),
              P.DirectedRootPath(3), P.FacilityRequest(1), P.MulticutSubset((1, 2))):
        assert P.payload_from_dict(P.payload_to_dict(p)) == p


def _random_instance(rng, kind):
    n = rng.randint(3, 5)
    pairs = [(i, i + 1) for i in range(n - 1)] + [tuple(rng.sample(range(n), 2)) for _ in range(rng.randint(0, 3))]
    directed = kind == P.DIRECTED_STEINER
    nc = [rng.randint(0, 3) for _ in range(n)] if kind == P.NODE_WEIGHTED else None
    g = Graph.build(n, [(u, v, rng.randint(0, 4)) for u, v in pairs], directed, nc)
    return P.ProblemInstance(kind, g, 0 if directed else None)


def _random_payload(rng, inst):
    n = inst.graph.node_count
    u, v = rng.sample(range(n), 2)
    return {
        P.STEINER_FOREST: P.SteinerSubset(tuple(rng.sample(range(n), 3))),
        P.MULTICUT: P.MulticutSubset(tuple(rng.sample(range(n), 3))),
        P.NODE_WEIGHTED: P.NodeWeightedPair(u, v),
        P.STEINER_NETWORK: P.SteinerNetworkPair(u, v, rng.randint(1, 2)),
        P.DIRECTED_STEINER: P.DirectedRootPath(rng.randrange(1, n)),
    }[inst.kind]


@pytest.mark.parametrize("kind", [P.STEINER_FOREST, P.MULTICUT, P.NODE_WEIGHTED, P.STEINER_NETWORK,
                                  P.DIRECTED_STEINER])
def test_upwards_closure_sampled(kind):
    rng = random.Random(kind)
    checked = 0
    for _ in range(20):
        inst = _random_instance(rng, kind)
        p = _random_payload(rng, inst)
        m = inst.n_elements
        for _ in range(500):
            b = {e for e in range(m) if rng.random() < 0.6}
            a = {e for e in b if rng.random() < 0.5}
            if P.satisfies(inst, p, a):
                assert P.satisfies(inst, p, b)
            checked += 1
    assert checked == 10 ** 4


@st.composite
def forest_case(draw):
    n = draw(st.integers(3, 5))
    m = draw(st.integers(1, 8))
    edges = []
    for _ in range(m):
        u = draw(st.integers(0, n - 1))
        v = draw(st.integers(0, n - 1).filter(lambda x: x != u))
        edges.append((u, v, 1))
    chosen = draw(st.sets(st.integers(0, m - 1)))
    nodes = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=4, unique=True))
    return Graph.build(n, edges), chosen, tuple(nodes)


@given(forest_case())
def test_strong_subset_is_all_pairs(case):
    g, chosen, nodes = case
    inst = P.ProblemInstance(P.STEINER_FOREST, g)
    whole = P.satisfies(inst, P.SteinerSubset(nodes), chosen)
    pairs = all(P.satisfies(inst, P.SteinerPair(u, v), chosen) for u, v in itertools.combinations(nodes, 2))
    assert whole == pairs


@given(forest_case())
def test_multicut_is_disconnection_of_the_rest(case):
    g, chosen, nodes = case
    inst = P.ProblemInstance(P.MULTICUT, g)
    u, v = nodes[:2]
    rest = [i for i in range(g.edge_count) if i not in chosen]
    assert P.satisfies(inst, P.MulticutPair(u, v), chosen) == (not is_pair_connected(g, rest, u, v))


@given(forest_case())
def test_unit_demand_network_equals_forest(case):
    g, chosen, nodes = case
    u, v = nodes[:2]
    net = P.satisfies(P.ProblemInstance(P.STEINER_NETWORK, g), P.SteinerNetworkPair(u, v, 1), chosen)
    assert net == P.satisfies(P.ProblemInstance(P.STEINER_FOREST, g), P.SteinerPair(u, v), chosen)
