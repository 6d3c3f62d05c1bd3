"""Deadline framework: levels, cheap elements and budgeted deadline-ordered services."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from . import problems as P
from .errors import InfeasibleError, InputError, InvariantViolation
from .oracles.base import OfflineSolution, nd_of
from .problems import FLSolution
from .rational import floor_log2, frac, pow2

ZERO = Fraction(0)

SERVE_SATISFIED = "satisfied"   # every pending request the transmission satisfies
SERVE_SELECTED = "selected"     # only the requests the service selected


@dataclass
class PendingState:
    rid: int
    payload: object
    release: Fraction
    deadline: Fraction
    single: OfflineSolution
    weight: Fraction  # I_q = c(S_q) / gamma
    level: Optional[int]
    served_at: Optional[Fraction] = None
    levels: List[int] = field(default_factory=list)

    @property
    def pending(self) -> bool:
        return self.served_at is None


@dataclass
class ServiceRecord:
    trigger: int
    time: Fraction
    level: Optional[int]
    e0: frozenset
    selected: List[int]
    solution: OfflineSolution
    last: int
    served: List[int]
    costs: Dict[str, Fraction]
    upgraded: List[int]
    transmitted: frozenset
    fl: Optional[FLSolution] = None

    @property
    def transmission_cost(self) -> Fraction:
        return self.costs["total"]


class DeadlineEngine:
    """Online ND with deadlines over a (plain) offline oracle."""

    def __init__(self, instance, oracle, serve_mode: str = SERVE_SATISFIED, e0_rule=None,
                 e0_bound=None, check: bool = True):
        if serve_mode not in (SERVE_SATISFIED, SERVE_SELECTED):
            raise InputError(f"unknown serve mode {serve_mode!r}")
        self.instance = instance
        self.oracle = oracle
        self.gamma = oracle.gamma
        self.serve_mode = serve_mode
        self.e0_rule = e0_rule
        self.e0_factor = Fraction(1) if e0_bound is None else frac(e0_bound)
        self.check = check
        self.requests: Dict[int, PendingState] = {}
        self.records: List[ServiceRecord] = []
        self.violations: List[str] = []
        self.fl = instance.kind == P.FACILITY_LOCATION

    def pending(self) -> List[PendingState]:
        return [q for q in self.requests.values() if q.pending]

    def upon_request(self, rid, payload, release, deadline) -> PendingState:
        release, deadline = frac(release), frac(deadline)
        if deadline < release:
            raise InputError(f"request {rid}: deadline before release")
        if rid in self.requests:
            raise InputError(f"duplicate request id {rid}")
        single = nd_of(self.oracle, self.instance, {rid: payload})
        if rid not in single.served:
            raise InfeasibleError(f"request {rid} cannot be served")
        q = PendingState(rid, payload, release, deadline, single, single.cost / self.gamma, None)
        self.requests[rid] = q
        if single.cost == 0:
            # a free singleton is sent straight away
            q.served_at = release
            costs = dict(e0=ZERO, solution=ZERO, single=ZERO, connection=ZERO, total=ZERO)
            self.records.append(ServiceRecord(rid, release, None, frozenset(), [rid], single, rid,
                                              [rid], costs, [], frozenset(single.elements), single.fl))
            return q
        q.level = floor_log2(q.weight)
        q.levels.append(q.level)
        return q

    def next_deadline(self):
        """``(deadline, rid)`` of the most urgent pending request, or None."""
        pend = self.pending()
        if not pend:
            return None
        q = min(pend, key=lambda q: (q.deadline, q.rid))
        return q.deadline, q.rid

    def build_cheap_E0(self, level) -> frozenset:
        if self.e0_rule is not None:
            return frozenset(self.e0_rule(self, level))
        costs = self.instance.element_costs
        cap = pow2(level) / len(costs)
        return frozenset(e for e, c in enumerate(costs) if c <= cap)

    def run_deadline_service(self, trigger, t) -> ServiceRecord:
        tq = self.requests[trigger]
        if not tq.pending:
            raise InvariantViolation(f"request {trigger} triggered a service but is already served",
                                     self.records)
        lam = tq.level + 1
        budget = self.gamma * pow2(lam)
        e0 = self.build_cheap_E0(lam)
        order = sorted((q for q in self.pending() if q.level <= lam), key=lambda q: (q.deadline, q.rid))
        selected: List[int] = []
        S = OfflineSolution(frozenset(), frozenset(), ZERO)
        last = None
        for q in order:
            last = q
            selected.append(q.rid)
            S2 = nd_of(self.oracle, self.instance, {r: self.requests[r].payload for r in selected}, e0)
            if S2.cost >= budget:
                break
            S = S2
        single = last.single
        inst = self.instance
        transmitted = frozenset(e0 | S.elements | single.elements)
        fl = None
        conn = ZERO
        if self.fl:
            served, fl, conn = self._fl_serve(selected, transmitted)
        elif self.serve_mode == SERVE_SELECTED:
            served = sorted(selected)
        else:
            served = sorted(q.rid for q in self.pending() if P.satisfies(inst, q.payload, transmitted))
        for r in served:
            self.requests[r].served_at = t
        upgraded = []
        for q in self.pending():
            if q.level <= lam:
                q.level = lam
                q.levels.append(lam)
                upgraded.append(q.rid)
        s_part = inst.cost(S.elements - e0)
        costs = dict(
            e0=inst.cost(e0),
            solution=s_part,
            single=inst.cost(single.elements - e0 - S.elements),
            connection=conn,
        )
        costs["total"] = costs["e0"] + costs["solution"] + costs["single"] + conn
        if self.fl:
            # budget parts charge each request's connection to the solution that bought it
            costs["solution"] += S.connection_cost
            costs["single"] += single.connection_cost
        rec = ServiceRecord(trigger, t, lam, e0, selected, S, last.rid, served, costs, sorted(upgraded),
                            transmitted, fl)
        self.records.append(rec)
        if self.check:
            probs = self.budget_problems(rec)
            if trigger not in served:
                probs.append(f"trigger {trigger} left unserved")
            if probs:
                self.violations.extend(probs)
                raise InvariantViolation("; ".join(probs), self.records)
        return rec

    def _fl_serve(self, selected, facilities):
        """Connect every selected request to its nearest transmitted facility."""
        dist = self.instance.distances
        assignment = {}
        conn = ZERO
        for r in selected:
            node = self.requests[r].payload.node
            best = None
            for f in sorted(facilities):
                d = dist[f][node]
                if d is not None and (best is None or d < best[0]):
                    best = (d, f)
            assignment[r] = best[1]
            conn += best[0]
        return sorted(selected), FLSolution(facilities, assignment), conn

    def budget_problems(self, rec: ServiceRecord) -> List[str]:
        if rec.level is None:
            return []
        unit = pow2(rec.level)
        g = self.gamma
        c = rec.costs
        out = []
        if c["e0"] > self.e0_factor * unit:
            out.append(f"E0 cost {c['e0']} > {self.e0_factor * unit}")
        if c["solution"] >= g * unit:
            out.append(f"kept solution {c['solution']} >= {g * unit}")
        if c["single"] >= 2 * g * unit:
            out.append(f"singleton {c['single']} >= {2 * g * unit}")
        bound = (self.e0_factor + 3 * g) * unit
        if c["total"] > bound:
            out.append(f"service cost {c['total']} > {bound}")
        return out

    def transmission_cost(self) -> Fraction:
        return sum((r.transmission_cost for r in self.records), ZERO)
