"""Primal-dual moat growing for edge-weighted Steiner forest.

``GWOracle`` is the classic synchronized-growth algorithm followed by
pruning to the edges some request still needs. ``PCGWOracle`` is a
prize-collecting variant in which each request stops driving moat growth
once the dual it has paid for reaches its penalty, polished by a local
search over the served set that re-solves with plain moat growing.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Tuple

from .. import problems as P
from ..graph import DisjointSet
from ..rational import INF
from .base import OfflineSolution, Oracle, itemize

STEINER_KINDS = (P.STEINER_FOREST, P.STEINER_TREE)


def request_pairs(payload) -> List[Tuple[int, int]]:
    """A subset request {v1..vk} becomes (v1,v2), ..., (v1,vk)."""
    nodes = P.payload_nodes(payload)
    return [(nodes[0], x) for x in nodes[1:] if x != nodes[0]]


def _needed(graph, forest, groups):
    """Edges of ``forest`` lying on the tree path of some group's terminals."""
    adj: Dict[int, List[Tuple[int, int]]] = {}
    for i in forest:
        e = graph.edges[i]
        adj.setdefault(e.tail, []).append((e.head, i))
        adj.setdefault(e.head, []).append((e.tail, i))
    keep = set()
    for a, b in groups:
        if a == b:
            continue
        # forest paths are unique; walk back from b to a
        prev = {a: None}
        stack = [a]
        while stack and b not in prev:
            x = stack.pop()
            for y, i in adj.get(x, ()):
                if y not in prev:
                    prev[y] = (x, i)
                    stack.append(y)
        if b not in prev:
            continue
        y = b
        while prev[y] is not None:
            x, i = prev[y]
            keep.add(i)
            y = x
    return keep


def moat_growing(instance, pairs, zeroed=frozenset(), penalties=None, owners=None):
    """Synchronized dual growth over components of the growing forest.

    ``pairs`` are terminal pairs; ``owners[i]`` names the request behind pair
    ``i``. With ``penalties`` given, every active component splits its growth
    evenly among the live requests it separates, and a request whose share
    reaches its penalty is dropped (it no longer keeps moats active).

    Returns ``(forest edges in insertion order, dropped request ids)``.
    """
    g = instance.graph
    n = g.node_count
    ds = DisjointSet(n)
    cost = [Fraction(0) if e.id in zeroed else e.cost for e in g.edges]
    forest: List[int] = []
    # zero-cost edges are contracted before any growth
    for e in g.edges:
        if cost[e.id] == 0 and ds.union(e.tail, e.head):
            forest.append(e.id)
    load = [Fraction(0)] * n
    owners = owners if owners is not None else list(range(len(pairs)))
    paid: Dict[object, Fraction] = {o: Fraction(0) for o in owners}
    dropped = set()

    while True:
        live = [(a, b, o) for (a, b), o in zip(pairs, owners)
                if o not in dropped and ds.find(a) != ds.find(b)]
        if not live:
            break
        active: Dict[int, List[object]] = {}
        for a, b, o in live:
            for x in (a, b):
                lst = active.setdefault(ds.find(x), [])
                if o not in lst:
                    lst.append(o)
        # next edge event
        eps, pick = None, None
        for e in g.edges:
            ra, rb = ds.find(e.tail), ds.find(e.head)
            if ra == rb:
                continue
            rate = (ra in active) + (rb in active)
            if rate == 0:
                continue
            t = (cost[e.id] - load[e.tail] - load[e.head]) / rate
            if eps is None or t < eps:
                eps, pick = t, e
        # next penalty event
        drop_eps = None
        if penalties is not None:
            share: Dict[object, Fraction] = {}
            for comp, lst in active.items():
                for o in lst:
                    share[o] = share.get(o, Fraction(0)) + Fraction(1, len(lst))
            for o, s in share.items():
                pen = penalties[o]
                if pen == INF:
                    continue
                t = (pen - paid[o]) / s
                if drop_eps is None or t < drop_eps:
                    drop_eps = t
        step = eps
        if drop_eps is not None and (step is None or drop_eps < step):
            step = drop_eps
        if step is None:
            break  # nothing can grow (disconnected terminals); caller sees them unserved
        if step < 0:
            step = Fraction(0)
        for v in range(n):
            if ds.find(v) in active:
                load[v] += step
        if penalties is not None:
            for comp, lst in active.items():
                for o in lst:
                    paid[o] += step / len(lst)
            newly = sorted((o for o in paid if o not in dropped and penalties[o] != INF
                            and paid[o] >= penalties[o]), key=str)
            dropped.update(newly)
            if newly and (drop_eps is not None and (eps is None or drop_eps < eps)):
                continue
        if pick is not None and step == eps:
            ds.union(pick.tail, pick.head)
            forest.append(pick.id)
    return forest, dropped


class GWOracle(Oracle):
    """Goemans-Williamson 2-approximation for edge-weighted Steiner forest."""

    name = "gw"
    gamma = Fraction(2)
    prize_collecting = False
    native_nd = True
    kinds = STEINER_KINDS

    def solve_pairs(self, instance, requests, zeroed):
        pairs, owners = [], []
        for q, p in requests.items():
            for pr in request_pairs(p):
                pairs.append(pr)
                owners.append(q)
        forest, _ = moat_growing(instance, pairs, zeroed, owners=owners)
        return frozenset(_needed(instance.graph, forest, pairs))

    def nd(self, instance, requests, zeroed=frozenset()):
        self._count()
        self.check_kind(instance)
        zeroed = frozenset(zeroed)
        for q, p in requests.items():
            P.check_payload(instance, p)
        chosen = self.solve_pairs(instance, requests, zeroed)
        return itemize(instance, requests, chosen, zeroed)


class PCGWOracle(GWOracle):
    """Prize-collecting Steiner forest by penalty-capped moat growing."""

    name = "pcgw"
    gamma = Fraction(3)
    prize_collecting = True
    native_nd = False

    def __init__(self, max_rounds: int = 4):
        super().__init__()
        self.max_rounds = max_rounds

    def _for_served(self, instance, requests, target, zeroed, penalties):
        chosen = self.solve_pairs(instance, {q: requests[q] for q in sorted(target, key=str)}, zeroed)
        return itemize(instance, requests, chosen, zeroed, penalties)

    def pcnd(self, instance, requests, penalties, zeroed=frozenset()):
        self._count()
        self.check_kind(instance)
        zeroed = frozenset(zeroed)
        pairs, owners = [], []
        for q, p in requests.items():
            P.check_payload(instance, p)
            for pr in request_pairs(p):
                pairs.append(pr)
                owners.append(q)
        forest, dropped = moat_growing(instance, pairs, zeroed, penalties, owners)
        kept = [(pr, o) for pr, o in zip(pairs, owners) if o not in dropped]
        chosen = _needed(instance.graph, forest, [pr for pr, _ in kept])
        best = itemize(instance, requests, chosen, zeroed, penalties)

        must = frozenset(q for q in requests if penalties[q] == INF)
        seen = {}

        def consider(target):
            nonlocal best
            target = frozenset(target) | must
            if target in seen:
                return seen[target]
            sol = self._for_served(instance, requests, target, zeroed, penalties)
            seen[target] = sol
            if sol.cost < best.cost:
                best = sol
            return sol

        consider(best.served)
        consider(frozenset(requests))
        if not must:
            consider(frozenset())
        # toggle single requests while that improves the total
        order = sorted(requests, key=str)
        for _ in range(self.max_rounds):
            improved = False
            for q in order:
                if q in must:
                    continue
                cur = best.served
                target = cur - {q} if q in cur else cur | {q}
                before = best.cost
                consider(target)
                if best.cost < before:
                    improved = True
            if not improved:
                break
        return best
