"""Delay framework: investment counters, critical levels and time forwarding.

Delay functions are continuous piecewise-linear, zero up to release and with
a positive terminal slope. Every "first time some sum reaches a target"
question is answered exactly by marching over the kinks of the sum, so no
numeric root finding is involved anywhere.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import problems as P
from .errors import InfeasibleError, InputError, InvariantViolation
from .oracles.base import OfflineSolution, nd_of
from .rational import floor_log2, fmt, frac, pow2

ZERO = Fraction(0)


@dataclass(frozen=True)
class DelayFunction:
    """``d(t)``: 0 up to ``points[0][0]``, linear between points, then ``slope``."""

    points: Tuple[Tuple[Fraction, Fraction], ...]
    slope: Fraction

    def __post_init__(self):
        pts = tuple((frac(t), frac(v)) for t, v in self.points)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "slope", frac(self.slope))
        if not pts:
            raise InputError("a delay function needs at least the release point")
        if pts[0][1] != 0:
            raise InputError("delay must be 0 at release")
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t1 <= t0:
                raise InputError("delay breakpoints must have increasing times")
            if v1 < v0:
                raise InputError("delay functions must be nondecreasing")
        if self.slope <= 0:
            raise InputError("the terminal slope must be positive")

    @classmethod
    def linear(cls, release, slope=1):
        return cls(((frac(release), ZERO),), frac(slope))

    @property
    def release(self) -> Fraction:
        return self.points[0][0]

    @property
    def times(self) -> List[Fraction]:
        return [t for t, _ in self.points]

    def __call__(self, t) -> Fraction:
        pts = self.points
        if t <= pts[0][0]:
            return ZERO
        i = bisect.bisect_right(self.times, t) - 1
        t0, v0 = pts[i]
        if i == len(pts) - 1:
            return v0 + self.slope * (t - t0)
        t1, v1 = pts[i + 1]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    def first_reach(self, c) -> Optional[Fraction]:
        """Smallest t with d(t) >= c; ``None`` when c <= 0 (true everywhere)."""
        if c <= 0:
            return None
        pts = self.points
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if v1 >= c:
                return t0 + (c - v0) * (t1 - t0) / (v1 - v0)
        t_last, v_last = pts[-1]
        return t_last + (c - v_last) / self.slope

    def kinks(self, c) -> List[Fraction]:
        """Times where ``max(0, d(t) - c)`` may change slope."""
        out = self.times
        x = self.first_reach(c)
        return out if x is None else out + [x]

    def to_dict(self) -> dict:
        return {"points": [[fmt(t), fmt(v)] for t, v in self.points], "slope": fmt(self.slope)}

    @classmethod
    def from_dict(cls, d) -> "DelayFunction":
        return cls(tuple((frac(t), frac(v)) for t, v in d["points"]), frac(d["slope"]))


Term = Tuple[DelayFunction, Fraction]


def excess(terms: Sequence[Term], t) -> Fraction:
    """``sum max(0, d_i(t) - c_i)``."""
    total = ZERO
    for f, c in terms:
        x = f(t) - c
        if x > 0:
            total += x
    return total


def first_reach(terms: Sequence[Term], target, start) -> Optional[Fraction]:
    """Earliest t >= start at which ``excess(terms, t) >= target``.

    The sum is nondecreasing and linear between consecutive kinks, so it is
    enough to find the first kink at or above the target and interpolate.
    """
    v = excess(terms, start)
    if v >= target:
        return start
    if not terms:
        return None
    kinks = sorted({x for f, c in terms for x in f.kinks(c) if x > start})
    prev, prev_v = start, v
    for x in kinks:
        v = excess(terms, x)
        if v >= target:
            return prev + (target - prev_v) * (x - prev) / (v - prev_v)
        prev, prev_v = x, v
    # past every kink each term grows at its terminal slope
    slope = sum((f.slope for f, c in terms), ZERO)
    return prev + (target - prev_v) / slope


@dataclass
class DelayRequest:
    rid: int
    payload: object
    delay: DelayFunction
    single: OfflineSolution
    level: Optional[int]
    h: Fraction = ZERO
    served_at: Optional[Fraction] = None
    levels: List[int] = field(default_factory=list)
    hs: List[Fraction] = field(default_factory=list)

    @property
    def release(self):
        return self.delay.release

    @property
    def pending(self) -> bool:
        return self.served_at is None


@dataclass
class DelayServiceRecord:
    time: Fraction
    level: Optional[int]          # None for a free service at release
    critical: Optional[int]
    cleaning: Dict[int, Fraction]
    e0: frozenset
    eligible: List[int]
    tau: Optional[Fraction]
    forward: Optional[OfflineSolution]   # what time forwarding returned
    solution: OfflineSolution            # what was transmitted besides E0
    served: List[int]
    forced: bool
    investments: Dict[int, Fraction]
    penalties_tau: Dict[int, Fraction]
    upgraded: List[int]
    costs: Dict[str, Fraction]
    iterations: int = 0
    connected: Dict[int, int] = field(default_factory=dict)  # facility-location extras

    @property
    def perfect(self) -> bool:
        return self.forward is not None and set(self.eligible) <= set(self.forward.served)

    @property
    def transmission_cost(self) -> Fraction:
        c = self.costs
        return c["e0"] + c["solution"] + c["snippet_connection"]


def invest_or_connect(h, pi, nearest) -> Tuple[bool, Fraction]:
    """Facility-location rule for an unserved request: connect it to the nearest
    open facility when its counter plus penalty covers the distance (raising the
    counter to the distance), otherwise invest the penalty.

    Returns ``(connect, new counter)``; ``nearest`` is None without facilities.
    """
    if nearest is not None and h + pi >= nearest:
        return True, max(h, nearest)
    return False, h + pi


class DelayEngine:
    """Online ND with delay over a prize-collecting oracle.

    ``e0_rule`` replaces the cheap-element construction (used by the
    request-based regime); it receives ``(engine, level)``.
    """

    def __init__(self, instance, oracle, e0_rule=None, e0_bound=None, check: bool = True):
        self.instance = instance
        self.oracle = oracle
        self.gamma = oracle.gamma
        self.e0_rule = e0_rule
        # bound on c(E0) as a multiple of 2^level
        self.e0_factor = Fraction(1) if e0_bound is None else frac(e0_bound)
        self.check = check
        self.requests: Dict[int, DelayRequest] = {}
        self.records: List[DelayServiceRecord] = []
        self.violations: List[str] = []
        self.invariant_failures: List[str] = []
        self.invariant_checks = 0
        self.fl = instance.kind == P.FACILITY_LOCATION

    # -- bookkeeping -------------------------------------------------------

    def pending(self) -> List[DelayRequest]:
        return [q for q in self.requests.values() if q.pending]

    def residual(self, rid, t) -> Fraction:
        q = self.requests[rid]
        return max(ZERO, q.delay(t) - q.h)

    def penalty(self, rid, t, t2) -> Fraction:
        """``pi_{t->t2}(q)`` with the counter frozen at its current value."""
        if t2 < t:
            raise InputError("penalty needs t2 >= t")
        q = self.requests[rid]
        return max(ZERO, q.delay(t2) - q.h)

    def level_sum(self, j, t) -> Fraction:
        return sum((self.residual(q.rid, t) for q in self.pending() if q.level <= j), ZERO)

    def upon_request(self, rid, payload, delay: DelayFunction, t=None) -> DelayRequest:
        if rid in self.requests:
            raise InputError(f"duplicate request id {rid}")
        t = delay.release if t is None else t
        single = nd_of(self.oracle, self.instance, {rid: payload})
        if rid not in single.served:
            raise InfeasibleError(f"request {rid} cannot be served")
        q = DelayRequest(rid, payload, delay, single, None)
        self.requests[rid] = q
        if single.cost == 0:
            self._serve_free(q, t)
            return q
        q.level = floor_log2(single.cost / self.gamma)
        q.levels.append(q.level)
        q.hs.append(q.h)
        return q

    def _serve_free(self, q, t):
        q.served_at = t
        costs = dict(clean=ZERO, e0=ZERO, solution=ZERO, invest=ZERO, snippet_connection=ZERO,
                     pc=ZERO, total=ZERO)
        self.records.append(DelayServiceRecord(
            t, None, None, {}, frozenset(), [q.rid], None, None, q.single, [q.rid], False,
            {}, {}, [], costs))

    # -- criticality -------------------------------------------------------

    def next_critical_time(self, now) -> Optional[Tuple[Fraction, int]]:
        """Earliest ``(t, j)`` with t >= now and level j critical; smallest j on ties.

        Only levels held by pending requests can be the earliest critical:
        between two held levels the sum is the lower level's while the
        threshold is larger.
        """
        pend = self.pending()
        if not pend:
            return None
        best = None
        for j in sorted({q.level for q in pend}):
            terms = [(q.delay, q.h) for q in pend if q.level <= j]
            t = first_reach(terms, pow2(j), now)
            if t is not None and (best is None or t < best[0]):
                best = (t, j)
        return best

    def check_invariant(self, t) -> None:
        """Sum of residuals at levels <= j is at most 2^j for every j."""
        pend = self.pending()
        self.invariant_checks += 1
        for j in sorted({q.level for q in pend}):
            s = self.level_sum(j, t)
            if s > pow2(j):
                msg = f"t={t}: residual sum {s} at levels <= {j} exceeds {pow2(j)}"
                self.violations.append(msg)
                self.invariant_failures.append(msg)
                if self.check:
                    raise InvariantViolation(msg, self.records)

    # -- services ----------------------------------------------------------

    def build_cheap_E0(self, level) -> frozenset:
        if self.e0_rule is not None:
            return frozenset(self.e0_rule(self, level))
        costs = self.instance.element_costs
        cap = pow2(level) / len(costs)
        return frozenset(e for e, c in enumerate(costs) if c <= cap)

    def _pc(self, eligible, penalties, e0):
        reqs = {q.rid: q.payload for q in eligible}
        return self.oracle.pcnd(self.instance, reqs, penalties, e0)

    def forward_time(self, e0, eligible: Sequence[DelayRequest], j, t):
        """Push the first future residual delay as late as the budget allows.

        Returns ``(tau, S, iterations)``.
        """
        budget = self.gamma * pow2(j)
        t1 = t
        served = frozenset()
        S = OfflineSolution(frozenset(), frozenset(), ZERO)
        t2 = t
        its = 0
        while len(served) < len(eligible):
            rest = [q for q in eligible if q.rid not in served]
            terms = [(q.delay, q.h) for q in rest]
            base = excess(terms, t1)
            t2 = first_reach(terms, base + budget, t1)
            pens = {q.rid: self.penalty(q.rid, t, t2) for q in eligible}
            S2 = self._pc(eligible, pens, e0)
            its += 1
            if S2.cost >= budget:
                break
            served = frozenset(S2.served)
            t1, S = t2, S2
        return t2, S, its

    def run_critical_service(self, j, t) -> DelayServiceRecord:
        if self.level_sum(j, t) < pow2(j):
            raise InvariantViolation(f"level {j} is not critical at {t}", self.records)
        lam = j + 1
        eligible = sorted((q for q in self.pending() if q.level <= lam), key=lambda q: q.rid)
        cleaning = {}
        for q in eligible:
            r = self.residual(q.rid, t)
            cleaning[q.rid] = r
            q.h += r
        e0 = self.build_cheap_E0(lam)
        tau, S, its = self.forward_time(e0, eligible, lam, t)
        pens = {q.rid: self.penalty(q.rid, t, tau) for q in eligible}
        forward = S
        ids = [q.rid for q in eligible]
        served = [r for r in ids if r in S.served]
        forced = False
        if not served:
            first = eligible[0]
            S = first.single
            served = [first.rid]
            forced = True
        investments, upgraded, connected = {}, [], {}
        snippet_conn = ZERO
        if self.fl:
            facilities = sorted(S.fl.facilities) if S.fl is not None else []
            dist = self.instance.distances
            for q in eligible:
                if q.rid in served:
                    continue
                near = None
                for f in facilities:
                    d = dist[f][q.payload.node]
                    if d is not None and (near is None or d < near[0]):
                        near = (d, f)
                connect, new_h = invest_or_connect(q.h, pens[q.rid], None if near is None else near[0])
                investments[q.rid] = new_h - q.h
                q.h = new_h
                if connect:
                    connected[q.rid] = near[1]
                    snippet_conn += near[0]
                    served.append(q.rid)
                else:
                    q.level = lam
                    upgraded.append(q.rid)
            served.sort()
        else:
            for q in eligible:
                if q.rid in served:
                    continue
                investments[q.rid] = pens[q.rid]
                q.h += pens[q.rid]
                q.level = lam
                upgraded.append(q.rid)
        for r in served:
            self.requests[r].served_at = t
        for q in eligible:
            q.levels.append(q.level)
            q.hs.append(q.h)

        inst = self.instance
        sol_cost = inst.cost(S.elements - e0) + S.connection_cost
        pc = inst.cost(forward.elements - e0) + forward.connection_cost + sum(
            (pens[r] for r in ids if r not in forward.served), ZERO)
        costs = dict(
            clean=sum(cleaning.values(), ZERO),
            e0=inst.cost(e0),
            solution=sol_cost,
            invest=sum(investments.values(), ZERO),
            snippet_connection=snippet_conn,
            pc=pc,
        )
        costs["total"] = costs["clean"] + costs["e0"] + costs["solution"] + costs["invest"] + snippet_conn
        rec = DelayServiceRecord(t, lam, j, cleaning, e0, ids, tau, forward, S, served, forced,
                                 investments, pens, upgraded, costs, its, connected)
        self.records.append(rec)
        if self.check:
            self._check_service(rec, eligible)
        return rec

    def budget_problems(self, rec: DelayServiceRecord) -> List[str]:
        """Itemized per-service bounds; an empty list means all hold."""
        if rec.level is None:
            return []
        unit = pow2(rec.level)
        g = self.gamma
        c = rec.costs
        out = []
        if c["clean"] > unit:
            out.append(f"cleaning {c['clean']} > {unit}")
        if c["e0"] > self.e0_factor * unit:
            out.append(f"E0 cost {c['e0']} > {self.e0_factor * unit}")
        if c["pc"] > 2 * g * unit:
            out.append(f"prize-collecting cost {c['pc']} > {2 * g * unit}")
        if rec.forced and c["solution"] >= 2 * g * unit:
            out.append(f"forced singleton {c['solution']} >= {2 * g * unit}")
        bound = (1 + self.e0_factor + 4 * g) * unit
        if c["total"] - c["snippet_connection"] > bound:
            out.append(f"service cost {c['total'] - c['snippet_connection']} > {bound}")
        return out

    def _check_service(self, rec, eligible):
        probs = self.budget_problems(rec)
        if not rec.served:
            probs.append("service served nothing")
        for q in eligible:
            if q.pending:
                # no residual delay anywhere in [t, tau]
                ts = [rec.time, rec.tau] + [x for x in q.delay.times if rec.time <= x <= rec.tau]
                if any(q.delay(x) > q.h for x in ts):
                    probs.append(f"request {q.rid} has residual delay before the forwarding time")
        if probs:
            self.violations.extend(probs)
            raise InvariantViolation("; ".join(probs), self.records)

    # -- totals ------------------------------------------------------------

    def delay_cost(self) -> Fraction:
        return sum((q.delay(q.served_at) for q in self.requests.values() if q.served_at is not None), ZERO)

    def transmission_cost(self) -> Fraction:
        return sum((r.transmission_cost for r in self.records), ZERO)

    def total_investment(self) -> Fraction:
        return sum((q.h for q in self.requests.values()), ZERO)
