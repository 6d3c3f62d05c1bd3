"""Exact offline solvers by exhaustive enumeration of element subsets."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .. import problems as P
from ..errors import CapacityError, InfeasibleError
from ..problems import FLSolution
from ..rational import INF
from . import tables as T
from .base import OfflineSolution, Oracle

DEFAULT_CAP = 20
_BIG = 10 ** 40


def _candidate_masks(m, zeroed_mask):
    # an optimum may always include every zeroed element (upwards closure)
    idx = np.arange(1 << m, dtype=np.int64)
    return idx[(idx & zeroed_mask) == zeroed_mask]


def _check_feasible(instance, requests, cap):
    full = (1 << instance.n_elements) - 1
    for q, p in requests.items():
        if not T.satisfaction_table(instance, p, cap)[full]:
            raise InfeasibleError(f"request {q} ({p}) cannot be satisfied by the whole universe")


def _pick(total, served_count, masks):
    best = total.min()
    cand = np.flatnonzero(total == best)
    if len(cand) > 1 and served_count is not None:
        sc = served_count[cand]
        cand = cand[sc == sc.max()]
    return int(cand[np.argmin(masks[cand])])


class ExactOracle(Oracle):
    """Minimum-cost ND and PCND by enumerating every element subset.

    Exponential in the number of elements; refuses universes above ``cap``.
    """

    name = "exact"
    gamma = Fraction(1)
    prize_collecting = True
    native_nd = True

    def __init__(self, cap: int = DEFAULT_CAP):
        super().__init__()
        self.cap = cap

    # plain ND is PCND with every penalty infinite
    def nd(self, instance, requests, zeroed=frozenset()):
        return self.pcnd(instance, requests, {q: INF for q in requests}, zeroed)

    def pcnd(self, instance, requests, penalties, zeroed=frozenset()):
        self._count()
        if instance.n_elements > self.cap:
            raise CapacityError(f"exact oracle capped at {self.cap} elements (instance has {instance.n_elements})")
        zeroed = frozenset(zeroed)
        if instance.kind == P.FACILITY_LOCATION:
            return _exact_fl(instance, requests, penalties, zeroed)
        with self._lock:
            _check_feasible(instance, requests, self.cap)
            tabs = [(q, T.satisfaction_table(instance, p, self.cap)) for q, p in requests.items()]
            costs = T.mask_costs(instance)
        m = instance.n_elements
        zmask = T.mask_of(zeroed)
        masks = _candidate_masks(m, zmask)
        _, cscale = T.int_costs(instance)
        finite = [penalties[q] for q, _ in tabs if penalties[q] != INF]
        scale = T.common_scale(finite + [Fraction(1, cscale)])
        mult = scale // cscale
        total = costs[masks & ~zmask]
        if costs.dtype == object or int(costs[-1]) * mult + sum(int(x * scale) for x in finite) >= T.INT64_SAFE:
            total = total.astype(object)
        total = total * mult
        feasible = np.ones(len(masks), dtype=bool)
        count = np.zeros(len(masks), dtype=np.int64)
        for q, tab in tabs:
            sat = tab[masks]
            count += sat
            pen = penalties[q]
            if pen == INF:
                feasible &= sat
            else:
                total = total + (~sat) * int(pen * scale)
        total = total[feasible]
        if len(total) == 0:
            raise InfeasibleError("no element set satisfies the must-serve requests")
        masks, count = masks[feasible], count[feasible]
        best = _pick(total, count, masks)
        mask = int(masks[best])
        elements = T.elements_of(mask)
        served = frozenset(q for q, tab in tabs if tab[mask])
        pen = sum((penalties[q] for q, _ in tabs if q not in served), Fraction(0))
        return OfflineSolution(elements, served, instance.cost(elements, zeroed), pen)


def _fl_tables(instance):
    t = T._tables(instance)
    if "fl" not in t:
        n = instance.graph.node_count
        dist = instance.distances
        fin = [d for row in dist for d in row if d is not None]
        opening = instance.element_costs
        scale = T.common_scale(fin + opening)
        near = np.full((1, n), _BIG, dtype=object)
        for i in range(n):
            row = np.array([_BIG if dist[i][v] is None else int(dist[i][v] * scale) for v in range(n)],
                           dtype=object)
            near = np.concatenate([near, np.minimum(near, row[None, :])])
        open_cost = T.subset_sums([int(c * scale) for c in opening], dtype=object)
        t["fl"] = (near, open_cost, scale)
    return t["fl"]


def _exact_fl(instance, requests, penalties, zeroed):
    n = instance.graph.node_count
    near, open_cost, scale = _fl_tables(instance)
    finite = [penalties[q] for q in requests if penalties[q] != INF]
    scale2 = T.common_scale(finite + [Fraction(1, scale)])
    mult = scale2 // scale
    zmask = T.mask_of(zeroed)
    masks = _candidate_masks(n, zmask)
    total = open_cost[masks & ~zmask] * mult
    count = np.zeros(len(masks), dtype=np.int64)
    feasible = np.ones(len(masks), dtype=bool)
    for q, p in requests.items():
        d = near[masks, p.node]
        reachable = d < _BIG
        pen = penalties[q]
        if pen == INF:
            feasible &= reachable
            total = total + np.where(reachable, d * mult, 0)
            count += reachable
        else:
            pen_i = int(pen * scale2)
            conn = reachable & (d * mult <= pen_i)
            total = total + np.where(conn, d * mult, pen_i)
            count += conn
    if not feasible.any():
        raise InfeasibleError("some request cannot reach any facility")
    total, masks, count = total[feasible], masks[feasible], count[feasible]
    best = _pick(total, count, masks)
    mask = int(masks[best])
    return fl_assign(instance, requests, penalties, T.elements_of(mask), zeroed)


def fl_assign(instance, requests, penalties, facilities, zeroed):
    """Connect each request to its nearest facility (lowest node on ties) when
    that is no dearer than its penalty; facilities left without clients are
    kept only if free."""
    dist = instance.distances
    facilities = sorted(facilities)
    assignment = {}
    pen = Fraction(0)
    for q, p in requests.items():
        best = None
        for f in facilities:
            d = dist[f][p.node]
            if d is not None and (best is None or d < best[0]):
                best = (d, f)
        if best is not None and (penalties[q] == INF or best[0] <= penalties[q]):
            assignment[q] = best[1]
        else:
            pen = pen + penalties[q]
    costs = instance.element_costs
    used = {f for f in facilities if f in assignment.values() or f in zeroed or costs[f] == 0}
    fl = FLSolution(frozenset(used), assignment)
    conn = P.fl_connection_cost(instance, assignment, requests)
    return OfflineSolution(fl.facilities, frozenset(assignment), instance.cost(fl.facilities, zeroed),
                           pen, conn, fl)
