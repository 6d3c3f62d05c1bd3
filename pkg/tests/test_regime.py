from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from onlinend import problems as P
from onlinend.deadline import DeadlineEngine
from onlinend.delay import DelayFunction
from onlinend.errors import ConfigurationError, InputError
from onlinend.graph import Graph
from onlinend.harness import GenParams, SimConfig, gen_random, simulate
from onlinend.oracles import ExactOracle
from onlinend.rational import pow2
from onlinend.regime import CLASSIC, DEADLINE, DELAY, REQUEST_BASED, RegimeController, build_E0_by_requests

from conftest import A, B, C, path_fl, star, triangle


def _cheap_engine(inst, reqs):
    eng = DeadlineEngine(inst, ExactOracle())
    for rid, p in enumerate(reqs):
        eng.upon_request(rid, p, 0, 10)
    return eng


def test_request_based_threshold():
    # singleton costs 4 (spoke 1) and 5 (spoke 2)
    g = Graph.build(3, [(0, 1, 4), (0, 2, 5)])
    inst = P.ProblemInstance(P.STEINER_FOREST, g)
    eng = _cheap_engine(inst, [P.SteinerPair(0, 1), P.SteinerPair(0, 2)])
    assert build_E0_by_requests(eng, 3, 2) == frozenset({0})


def test_request_based_skips_already_satisfied():
    t = triangle()
    # (a,c) and (c,b) are bought first; (a,b) is then already connected
    eng = _cheap_engine(t, [P.SteinerPair(A, C), P.SteinerPair(C, B), P.SteinerPair(A, B)])
    assert build_E0_by_requests(eng, 4, 2) == frozenset({1, 2})


def test_request_based_refuses_facility_location():
    eng = DeadlineEngine(path_fl(), ExactOracle())
    with pytest.raises(ConfigurationError):
        build_E0_by_requests(eng, 3, 2)
    with pytest.raises(ConfigurationError):
        RegimeController(path_fl(), ExactOracle(), regime=REQUEST_BASED)


def _ring(m):
    return P.ProblemInstance(P.STEINER_FOREST, Graph.build(m, [(i, (i + 1) % m, 1) for i in range(m)]))


def test_guesses_square_and_switch_to_classic():
    inst = _ring(12)
    ctl = RegimeController(inst, ExactOracle(), DEADLINE, REQUEST_BASED)
    owners = [ctl.route(rid) for rid in range(7)]
    assert owners == [0, 0, 1, 1, 1, 1, 2]
    assert ctl.guesses == [2, 4, 16]
    assert [s.classic for s in ctl.slots] == [False, False, True]
    # a classic slot takes everything after it
    assert [ctl.route(rid) for rid in range(7, 40)] == [2] * 33


def test_switch_rule_on_ten_elements():
    ctl = RegimeController(_ring(10), ExactOracle(), DEADLINE, REQUEST_BASED)
    for rid in range(7):
        ctl.route(rid)
    assert ctl.guesses == [2, 4, 16] and ctl.slots[-1].classic


def test_first_request_goes_to_the_first_engine():
    ctl = RegimeController(_ring(12), ExactOracle(), DEADLINE, REQUEST_BASED)
    assert ctl.route(0) == 0 and len(ctl.slots) == 1


def test_classic_regime_is_one_engine():
    ctl = RegimeController(_ring(12), ExactOracle(), DELAY, CLASSIC)
    assert [ctl.route(r) for r in range(20)] == [0] * 20
    assert ctl.guesses == [None]


def test_controller_arguments():
    with pytest.raises(InputError):
        RegimeController(_ring(4), ExactOracle(), "burst")
    with pytest.raises(InputError):
        RegimeController(_ring(4), ExactOracle(), DEADLINE, "adaptive")
    with pytest.raises(InputError):
        RegimeController(_ring(4), ExactOracle(), DEADLINE, REQUEST_BASED, k0=1)


REGIME_FAMILIES = ["steiner_forest", "multicut", "node_weighted", "steiner_network", "directed_steiner"]


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.sampled_from(REGIME_FAMILIES), st.sampled_from([DEADLINE, DELAY]))
def test_request_based_runs(seed, family, mode):
    params = GenParams(family=family, mode=mode, requests=(1, 8))
    spec = gen_random(params, seed)
    rep = simulate(spec, SimConfig(regime=REQUEST_BASED))
    assert all(rep.checks.values()), rep.violations
    # each request is owned by exactly one engine and served by that engine only
    served = {}
    for idx, rec in rep.records:
        for r in rec.served:
            assert r not in served
            served[r] = idx
    assert set(served) == {r.rid for r in spec.requests}
    # E0 bound of request-based engines
    for idx, rec in rep.records:
        g = rep.guesses[idx]
        if rec.level is not None and g is not None and g <= spec.instance.n_elements:
            assert spec.instance.cost(rec.e0) <= pow2(rec.level)


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6))
def test_terminal_guess_at_most_k_squared(seed):
    spec = gen_random(GenParams(family="steiner_forest", requests=(2, 8)), seed)
    rep = simulate(spec, SimConfig(regime=REQUEST_BASED))
    last = rep.guesses[-1]
    assert last is not None and last <= max(2, spec.k) ** 2
