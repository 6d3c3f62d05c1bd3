from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from onlinend import problems as P
from onlinend.delay import DelayEngine, DelayFunction, excess, first_reach, invest_or_connect
from onlinend.errors import InputError, InvariantViolation
from onlinend.harness import GenParams, SimConfig, gen_random, simulate
from onlinend.oracles import ExactOracle, PCGWOracle
from onlinend.rational import pow2

from conftest import A, B, star, triangle

lin = DelayFunction.linear


@st.composite
def delay_functions(draw, release=None):
    r = F(draw(st.integers(0, 6))) if release is None else release
    pts = [(r, F(0))]
    t, v = r, F(0)
    for _ in range(draw(st.integers(0, 3))):
        t += F(draw(st.integers(1, 8)), draw(st.integers(1, 3)))
        v += F(draw(st.integers(0, 6)), draw(st.integers(1, 2)))
        pts.append((t, v))
    return DelayFunction(tuple(pts), F(draw(st.integers(1, 4)), draw(st.integers(1, 2))))


# -- delay functions ----------------------------------------------------------

def test_delay_function_validation():
    with pytest.raises(InputError):
        DelayFunction(((0, 1),), 1)
    with pytest.raises(InputError):
        DelayFunction(((0, 0), (1, 2), (1, 3)), 1)
    with pytest.raises(InputError):
        DelayFunction(((0, 0), (1, 2), (2, 1)), 1)
    with pytest.raises(InputError):
        lin(0, 0)


def test_delay_function_values():
    d = DelayFunction(((1, 0), (3, 2), (5, 2)), 3)
    assert [d(x) for x in (0, 1, 2, 3, 4, 5, 6)] == [0, 0, 1, 2, 2, 2, 5]
    assert d.first_reach(2) == 3
    assert d.first_reach(5) == 6
    assert d.first_reach(0) is None
    assert DelayFunction.from_dict(d.to_dict()) == d


@given(delay_functions())
def test_delay_is_monotone_and_zero_at_release(d):
    xs = sorted(set(d.times + [d.release - 1, d.times[-1] + 3]))
    vals = [d(x) for x in xs]
    assert vals == sorted(vals)
    assert d(d.release) == 0


@given(delay_functions(), st.fractions(min_value=F(1, 8), max_value=F(30)))
def test_first_reach_is_first(d, c):
    t = d.first_reach(c)
    assert d(t) == c
    assert all(d(x) < c for x in d.times if x < t)


@given(st.lists(st.tuples(delay_functions(), st.fractions(min_value=0, max_value=5)), min_size=1, max_size=4),
       st.fractions(min_value=F(1, 4), max_value=20), st.fractions(min_value=0, max_value=8))
def test_sum_first_reach_is_exact_and_earliest(terms, target, start):
    t = first_reach(terms, target, start)
    assert t >= start
    assert excess(terms, t) >= target
    if t > start:
        # continuity: exactly on target, and every earlier kink is below it
        assert excess(terms, t) == target
        kinks = {x for f, c in terms for x in f.kinks(c) if start <= x < t}
        assert all(excess(terms, x) < target for x in kinks)
        assert excess(terms, (start + t) / 2) < target


# -- counters -----------------------------------------------------------------

def _engine(inst=None, level=None, delays=(), payloads=None, oracle=None, check=True):
    eng = DelayEngine(inst or triangle(), oracle or ExactOracle(), check=check)
    for rid, d in enumerate(delays):
        p = payloads[rid] if payloads else P.SteinerPair(A, B)
        q = eng.upon_request(rid, p, d)
        if level is not None:
            q.level = level
            q.levels[-1] = level
    return eng


def test_residual_and_penalty():
    eng = _engine(delays=[lin(0)])
    q = eng.requests[0]
    assert q.level == 2
    q.h = F(3, 2)
    assert eng.residual(0, 2) == F(1, 2)
    q.h = F(5)
    assert eng.residual(0, 2) == 0
    q.h = F(0)
    assert eng.residual(0, 0) == 0
    q.h = F(2)
    assert eng.penalty(0, 1, 5) == 3
    q.h = F(0)
    assert eng.penalty(0, 0, 2) == 2
    with pytest.raises(InputError):
        eng.penalty(0, 2, 1)


def test_critical_times():
    assert _engine(level=0, delays=[lin(3)]).next_critical_time(3) == (4, 0)
    assert _engine(level=0, delays=[lin(0), lin(0)]).next_critical_time(0) == (F(1, 2), 0)
    assert _engine(level=1, delays=[lin(0)]).next_critical_time(0) == (2, 1)
    # natural level of a serve-cost-4 request is 2
    assert _engine(delays=[lin(0)]).next_critical_time(0) == (4, 2)
    assert _engine().next_critical_time(0) is None


def test_criticality_smallest_level_on_ties():
    eng = _engine(delays=[lin(0), lin(0, 3)])
    eng.requests[0].level = 1
    eng.requests[1].level = 2
    # level 1 reaches 2 at t=2; levels <= 2 reach 4 at t=1
    assert eng.next_critical_time(0) == (1, 2)
    eng.requests[1].level = 0
    eng.requests[1].h = F(100)
    assert eng.next_critical_time(0) == (2, 1)


def _solve_linear_sums(reqs):
    """Earliest (t, j) for linear delays with zero counters, solved interval by
    interval between releases: on each interval the level sum is affine."""
    best = None
    for j in sorted({lvl for _, lvl, _ in reqs}):
        act = sorted((F(r), F(s)) for r, lvl, s in reqs if lvl <= j)
        target = pow2(j)
        cuts = [r for r, _ in act] + [None]
        for k in range(len(act)):
            lo, hi = cuts[k], cuts[k + 1]
            slope = sum(s for _, s in act[:k + 1])
            offset = sum(s * r for r, s in act[:k + 1])
            t = (target + offset) / slope
            if t >= lo and (hi is None or t <= hi):
                if best is None or t < best[0]:
                    best = (t, j)
                break
    return best


@settings(max_examples=60)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(-1, 3), st.integers(1, 3)), min_size=1, max_size=4))
def test_critical_time_matches_closed_form(reqs):
    eng = DelayEngine(triangle(), ExactOracle())
    for rid, (r, lvl, s) in enumerate(reqs):
        q = eng.upon_request(rid, P.SteinerPair(A, B), lin(r, s))
        q.level = lvl
    assert eng.next_critical_time(0) == _solve_linear_sums(reqs)


# -- forwarding ---------------------------------------------------------------

def test_forward_time_breaks_when_paying_delay_is_cheaper():
    eng = _engine(level=0, delays=[lin(0)])
    tau, S, its = eng.forward_time(frozenset(), [eng.requests[0]], 1, F(0))
    assert tau == 2 and S.served == frozenset() and S.cost == 0 and its == 1


def test_forward_time_serves_when_cheap():
    inst = star(1, 1)
    eng = _engine(inst, level=0, delays=[lin(0)], payloads=[P.SteinerPair(0, 1)])
    tau, S, its = eng.forward_time(frozenset(), [eng.requests[0]], 1, F(0))
    assert tau == 2 and S.served == {0} and S.cost == 1


def test_forward_time_free_request_in_first_round():
    eng = _engine(level=0, delays=[lin(0)])
    tau, S, its = eng.forward_time(frozenset({0}), [eng.requests[0]], 1, F(0))
    assert S.served == {0} and S.cost == 0 and its == 1


def test_injected_level_trace():
    # level 0 forced onto a request whose singleton costs 4; the service
    # still runs, only the forced-singleton bound is out of reach
    eng = _engine(level=0, delays=[lin(0)], check=False)
    assert eng.next_critical_time(0) == (1, 0)
    rec = eng.run_critical_service(0, F(1))
    assert rec.level == 1 and rec.tau == 3
    assert rec.cleaning == {0: 1}
    assert rec.e0 == frozenset()
    assert rec.forced and rec.served == [0] and rec.iterations == 1
    assert {k: rec.costs[k] for k in ("clean", "e0", "solution", "invest", "total")} == \
        {"clean": 1, "e0": 0, "solution": 4, "invest": 0, "total": 5}
    assert rec.costs["total"] <= (2 + 4) * 2
    assert eng.budget_problems(rec) == ["forced singleton 4 >= 4"]
    assert eng.delay_cost() == 1 and eng.total_investment() == 1


def test_natural_single_request_trace():
    eng = _engine(delays=[lin(0)])
    assert eng.next_critical_time(0) == (4, 2)
    rec = eng.run_critical_service(2, F(4))
    assert rec.level == 3
    assert rec.e0 == frozenset({1, 2})
    assert rec.cleaning == {0: 4}
    assert rec.tau == 12
    assert not rec.forced and rec.served == [0]
    assert rec.costs["e0"] == 4 and rec.costs["solution"] == 0 and rec.costs["total"] == 8
    assert eng.budget_problems(rec) == []
    assert eng.delay_cost() + eng.transmission_cost() == 8


def test_service_at_non_critical_level_is_rejected():
    eng = _engine(delays=[lin(0)])
    with pytest.raises(InvariantViolation):
        eng.run_critical_service(2, F(1))


def test_invariant_check_records_or_raises():
    eng = _engine(level=0, delays=[lin(0)], check=False)
    eng.check_invariant(F(3))
    assert eng.invariant_failures
    eng = _engine(level=0, delays=[lin(0)])
    with pytest.raises(InvariantViolation):
        eng.check_invariant(F(3))


def test_free_singleton_served_at_release():
    eng = _engine(delays=[lin(2)], payloads=[P.SteinerPair(A, A)])
    assert eng.requests[0].served_at == 2 and eng.requests[0].level is None


# -- facility-location invest-or-connect ----------------------------------------

@pytest.mark.parametrize("h,pi,dist,connect,new_h", [
    (1, 2, F(5, 2), True, F(5, 2)),
    (1, 2, 10, False, 3),
    (5, 0, 4, True, 5),
    (1, 2, None, False, 3),
])
def test_invest_or_connect(h, pi, dist, connect, new_h):
    assert invest_or_connect(F(h), F(pi), dist) == (connect, new_h)


# -- run-level properties -----------------------------------------------------

DELAY_FAMILIES = ["steiner_forest", "strong_steiner_forest", "multicut", "node_weighted", "steiner_network",
                  "directed_steiner", "steiner_tree", "facility_location"]


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.sampled_from(DELAY_FAMILIES))
def test_delay_runs_hold_every_check(seed, family):
    spec = gen_random(GenParams(family=family, mode="delay"), seed)
    rep = simulate(spec)
    assert all(rep.checks.values()), rep.violations
    for idx, rec in rep.records:
        if rec.level is None:
            continue
        assert rec.served
        for r in rec.upgraded:
            assert r not in rec.served
    assert len([1 for _, rec in rep.records]) <= spec.k


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_pcgw_delay_runs(seed):
    spec = gen_random(GenParams(family="steiner_forest", mode="delay"), seed)
    rep = simulate(spec, SimConfig(oracle="pcgw"))
    assert all(rep.checks.values()), rep.violations


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_counters_and_levels_monotone(seed):
    spec = gen_random(GenParams(family="steiner_forest", mode="delay"), seed)
    from onlinend.harness.simulate import _run_delay, make_controller
    _, ctl = make_controller(spec, SimConfig())
    _run_delay(spec, ctl, SimConfig())
    for q in ctl.engines[0].requests.values():
        assert q.hs == sorted(q.hs)
        assert q.levels == sorted(q.levels)
