"""Random benchmark instances and the set-cover reduction family."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .. import problems as P
from ..delay import DelayFunction
from ..errors import InputError
from ..graph import Graph
from .spec import DEADLINE, DELAY, InstanceSpec, RequestSpec

FAMILIES = (
    "steiner_forest", "strong_steiner_forest", "steiner_tree", "multicut", "strong_multicut",
    "node_weighted", "steiner_network", "directed_steiner", "facility_location",
)
KIND_OF = {
    "steiner_forest": P.STEINER_FOREST,
    "strong_steiner_forest": P.STEINER_FOREST,
    "steiner_tree": P.STEINER_TREE,
    "multicut": P.MULTICUT,
    "strong_multicut": P.MULTICUT,
    "node_weighted": P.NODE_WEIGHTED,
    "steiner_network": P.STEINER_NETWORK,
    "directed_steiner": P.DIRECTED_STEINER,
    "facility_location": P.FACILITY_LOCATION,
}


@dataclass
class GenParams:
    family: str = "steiner_forest"
    mode: str = DEADLINE
    nodes: Tuple[int, int] = (4, 8)
    max_elements: int = 12
    requests: Tuple[int, int] = (1, 8)
    costs: Tuple[int, int] = (1, 8)
    horizon: int = 10
    window: Tuple[int, int] = (0, 6)
    slopes: Tuple[int, int] = (1, 3)
    max_demand: int = 2

    def check(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.mode not in (DEADLINE, DELAY):
            raise InputError(f"unknown mode {self.mode!r}")
        for name in ("nodes", "requests", "costs", "window", "slopes"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise InputError(f"{name}: empty range {lo}..{hi}")
        if self.nodes[0] < 2:
            raise InputError("instances need at least 2 nodes")
        if self.costs[0] < 0 or self.slopes[0] < 1 or self.window[0] < 0:
            raise InputError("costs must be nonnegative, slopes and windows positive")
        if self.max_elements < self.nodes[1] - 1 and self.family not in ("node_weighted", "facility_location"):
            raise InputError("max_elements too small to connect the largest graph")
        if self.family == "steiner_network" and self.max_elements < self.nodes[1]:
            raise InputError("steiner_network needs room for a spanning cycle")


def _cost(rng, p):
    return Fraction(rng.randint(*p.costs))


def _connected_edges(rng, n, m, p, cycle=False):
    """A random spanning tree (or cycle) plus extra edges, m edges in total."""
    order = list(range(n))
    rng.shuffle(order)
    pairs = []
    if cycle:
        pairs = [(order[i], order[(i + 1) % n]) for i in range(n)] if n > 2 else [(order[0], order[1])] * 2
    else:
        for i in range(1, n):
            pairs.append((order[rng.randrange(i)], order[i]))
    while len(pairs) < m:
        u, v = rng.sample(range(n), 2)
        pairs.append((u, v))
    return [(u, v, _cost(rng, p)) for u, v in pairs]


def _arborescence(rng, n, m, p, root=0):
    others = list(range(n))
    others.remove(root)
    rng.shuffle(others)
    reached = [root]
    arcs = []
    for v in others:
        arcs.append((rng.choice(reached), v))
        reached.append(v)
    while len(arcs) < m:
        u, v = rng.sample(range(n), 2)
        arcs.append((u, v))
    return [(u, v, _cost(rng, p)) for u, v in arcs]


def _times(rng, p):
    r = Fraction(rng.randint(0, p.horizon))
    if rng.random() < 0.5:
        r += Fraction(rng.randint(1, 3), 4)
    return r


def _delay(rng, r, p) -> DelayFunction:
    if rng.random() < 0.5:
        return DelayFunction.linear(r, rng.randint(*p.slopes))
    # a plateau or a ramp change, then the terminal slope
    pts = [(r, Fraction(0))]
    t, v = r, Fraction(0)
    for _ in range(rng.randint(1, 2)):
        t += Fraction(rng.randint(1, 4), rng.choice((1, 2)))
        v += Fraction(rng.randint(0, 3))
        pts.append((t, v))
    return DelayFunction(tuple(pts), Fraction(rng.randint(*p.slopes)))


def _payload(rng, family, inst, n):
    if family == "steiner_forest":
        u, v = rng.sample(range(n), 2)
        return P.SteinerPair(u, v)
    if family == "strong_steiner_forest":
        return P.SteinerSubset(tuple(sorted(rng.sample(range(n), rng.randint(2, min(4, n))))))
    if family == "steiner_tree":
        return P.SteinerPair(inst.root, rng.choice([v for v in range(n) if v != inst.root]))
    if family == "multicut":
        u, v = rng.sample(range(n), 2)
        return P.MulticutPair(u, v)
    if family == "strong_multicut":
        return P.MulticutSubset(tuple(sorted(rng.sample(range(n), rng.randint(2, min(3, n))))))
    if family == "node_weighted":
        u, v = rng.sample(range(n), 2)
        return P.NodeWeightedPair(u, v)
    if family == "steiner_network":
        u, v = rng.sample(range(n), 2)
        return P.SteinerNetworkPair(u, v, rng.randint(1, 2))
    if family == "directed_steiner":
        return P.DirectedRootPath(rng.choice([v for v in range(n) if v != inst.root]))
    return P.FacilityRequest(rng.randrange(n))


def gen_random(params: GenParams, seed: int, name: Optional[str] = None) -> InstanceSpec:
    """A deterministic random instance; every request is satisfiable by the whole universe."""
    params.check()
    rng = random.Random(seed)
    fam = params.family
    n = rng.randint(*params.nodes)
    lo = n if fam == "steiner_network" else n - 1
    m = rng.randint(lo, max(lo, min(params.max_elements, lo + n)))
    directed = False
    root = None
    node_costs = edge_weights = None
    if fam == "directed_steiner":
        edges = _arborescence(rng, n, m, params)
        directed, root = True, 0
    elif fam == "steiner_network":
        edges = _connected_edges(rng, n, m, params, cycle=True)
    elif fam in ("node_weighted", "facility_location"):
        m = rng.randint(n - 1, min(n + 3, n * (n - 1) // 2))
        edges = _connected_edges(rng, n, m, params)
        node_costs = [_cost(rng, params) for _ in range(n)]
        if fam == "facility_location":
            edge_weights = [_cost(rng, params) for _ in edges]
    else:
        edges = _connected_edges(rng, n, m, params)
        if fam == "steiner_tree":
            root = 0
    g = Graph.build(n, edges, directed, node_costs, edge_weights)
    inst = P.ProblemInstance(KIND_OF[fam], g, root)
    k = rng.randint(*params.requests)
    reqs = []
    for _ in range(k):
        payload = _payload(rng, fam, inst, n)
        r = _times(rng, params)
        if params.mode == DEADLINE:
            reqs.append(RequestSpec(0, payload, r, r + rng.randint(*params.window)))
        else:
            reqs.append(RequestSpec(0, payload, r, None, _delay(rng, r, params)))
    reqs.sort(key=lambda q: q.release)
    for i, q in enumerate(reqs):
        q.rid = i
    spec = InstanceSpec(inst, reqs, params.mode, name or f"{fam}-{params.mode}-{seed}", seed,
                        {"family": fam})
    spec.validate()
    return spec


NODE_WEIGHTED_LB = "node-weighted"
DIRECTED_LB = "directed"


def set_cover_system(i: int):
    """Elements {0,1,2}^i and sets {0,1}^i; x is in s iff every x_c is s_c or 2."""
    elements = list(itertools.product(range(3), repeat=i))
    sets = list(itertools.product(range(2), repeat=i))
    member = [[all(xc == sc or xc == 2 for xc, sc in zip(x, s)) for x in elements] for s in sets]
    return elements, sets, member


def gen_set_cover_lb(i: int, mode: str = NODE_WEIGHTED_LB, deadline_mode: str = DEADLINE,
                     schedule: Optional[List[Tuple[int, Fraction, Fraction]]] = None,
                     set_cost=1, seed: int = 0) -> InstanceSpec:
    """The root / set / element graph of the set-cover reduction.

    Node 0 is the root, nodes ``1..2^i`` the sets, the rest the ``3^i``
    elements. ``schedule`` lists ``(element index, release, deadline or
    slope)``; by default one request per element, all released at 0 with
    deadline 1 (or slope 1 under delay).
    """
    if not isinstance(i, int) or not 1 <= i <= 6:
        raise InputError("set-cover instances need 1 <= i <= 6")
    if mode not in (NODE_WEIGHTED_LB, DIRECTED_LB):
        raise InputError(f"unknown reduction mode {mode!r}")
    elements, sets, member = set_cover_system(i)
    n_sets, n_el = len(sets), len(elements)
    n = 1 + n_sets + n_el
    set_node = lambda s: 1 + s
    el_node = lambda x: 1 + n_sets + x
    edges = []
    cost = Fraction(set_cost)
    for s in range(n_sets):
        edges.append((0, set_node(s), cost if mode == DIRECTED_LB else 0))
    for s in range(n_sets):
        for x in range(n_el):
            if member[s][x]:
                edges.append((set_node(s), el_node(x), 0))
    if mode == DIRECTED_LB:
        g = Graph.build(n, edges, directed=True)
        inst = P.ProblemInstance(P.DIRECTED_STEINER, g, 0)
        make = lambda x: P.DirectedRootPath(el_node(x))
    else:
        node_costs = [Fraction(0)] * n
        for s in range(n_sets):
            node_costs[set_node(s)] = cost
        g = Graph.build(n, edges, node_costs=node_costs)
        inst = P.ProblemInstance(P.NODE_WEIGHTED, g, 0)
        make = lambda x: P.NodeWeightedPair(0, el_node(x))
    if schedule is None:
        schedule = [(x, Fraction(0), Fraction(1)) for x in range(n_el)]
    reqs = []
    for rid, (x, r, extra) in enumerate(sorted(schedule, key=lambda s: s[1])):
        r = Fraction(r)
        if deadline_mode == DEADLINE:
            reqs.append(RequestSpec(rid, make(x), r, r + Fraction(extra)))
        else:
            reqs.append(RequestSpec(rid, make(x), r, None, DelayFunction.linear(r, Fraction(extra))))
    spec = InstanceSpec(inst, reqs, deadline_mode, f"set-cover-lb-{mode}-{i}", seed,
                        {"family": "set_cover_lb", "i": i, "elements": n_el, "sets": n_sets})
    spec.validate()
    return spec
