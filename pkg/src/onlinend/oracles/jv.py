"""Jain-Vazirani primal-dual facility location, with optional penalties.

Phase 1 raises every unfrozen client's dual ``alpha`` at unit rate. A client
pays ``alpha - dist`` towards each facility it has reached; a facility whose
payments cover its opening cost opens temporarily and freezes every client
that has reached it. A client reaching an already open facility freezes as
well, and (prize-collecting) a client whose dual reaches its penalty freezes
unserved. Phase 2 keeps a maximal set of temporarily open facilities, in
opening order, no two of which are paid by a common client.
"""
from __future__ import annotations

from fractions import Fraction

from .. import problems as P
from ..errors import InfeasibleError
from ..rational import INF
from .base import Oracle
from .exact import fl_assign


def jain_vazirani(instance, requests, penalties, zeroed=frozenset()):
    """Run both phases and return the kept facility set."""
    n = instance.graph.node_count
    dist = instance.distances
    fcost = [Fraction(0) if v in zeroed else c for v, c in enumerate(instance.element_costs)]
    clients = sorted(requests, key=str)
    node = {q: requests[q].node for q in clients}
    d = {(i, q): dist[i][node[q]] for i in range(n) for q in clients}
    alpha = {}
    frozen_at = {}
    opened = []  # (time, facility)
    is_open = set()
    t = Fraction(0)

    def contribution(i, q):
        a = alpha.get(q, t)
        dd = d[(i, q)]
        return Fraction(0) if dd is None or a <= dd else a - dd

    while True:
        # settle every instantaneous event at time t
        changed = True
        while changed:
            changed = False
            for i in range(n):
                if i in is_open:
                    continue
                paid = sum((contribution(i, q) for q in clients), Fraction(0))
                if paid >= fcost[i]:
                    is_open.add(i)
                    opened.append((t, i))
                    changed = True
            for q in clients:
                if q in alpha:
                    continue
                if any(d[(i, q)] is not None and d[(i, q)] <= t for i in is_open):
                    alpha[q] = t
                    changed = True
                elif penalties.get(q, INF) != INF and penalties[q] <= t:
                    alpha[q] = t
                    frozen_at[q] = "penalty"
                    changed = True
        active = [q for q in clients if q not in alpha]
        if not active:
            break
        nxt = None
        for q in active:
            for i in range(n):
                dd = d[(i, q)]
                if dd is not None and dd > t and (nxt is None or dd < nxt):
                    nxt = dd
            pen = penalties.get(q, INF)
            if pen != INF and pen > t and (nxt is None or pen < nxt):
                nxt = pen
        for i in range(n):
            if i in is_open:
                continue
            rate = sum(1 for q in active if d[(i, q)] is not None and d[(i, q)] <= t)
            if rate:
                paid = sum((contribution(i, q) for q in clients), Fraction(0))
                cand = t + (fcost[i] - paid) / rate
                if nxt is None or cand < nxt:
                    nxt = cand
        if nxt is None:
            raise InfeasibleError("facility location clients cannot reach any facility")
        t = nxt

    # phase 2: conflict-free subset in opening order
    kept = []
    for _, i in sorted(opened):
        payers = {q for q in clients if contribution(i, q) > 0}
        if all(not (payers & {q for q in clients if contribution(k, q) > 0}) for k in kept):
            kept.append(i)
    return frozenset(kept)


class JVOracle(Oracle):
    """Primal-dual facility location (factor 3)."""

    name = "jv"
    gamma = Fraction(3)
    prize_collecting = True
    native_nd = False
    kinds = (P.FACILITY_LOCATION,)

    def pcnd(self, instance, requests, penalties, zeroed=frozenset()):
        self._count()
        self.check_kind(instance)
        zeroed = frozenset(zeroed)
        for p in requests.values():
            P.check_payload(instance, p)
        facilities = jain_vazirani(instance, requests, penalties, zeroed)
        return fl_assign(instance, requests, penalties, facilities, zeroed)
