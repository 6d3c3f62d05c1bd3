"""Network-design problem families as element universes with request predicates.

Every family except facility location fits the same mould: a finite universe
of priced elements (edges or nodes) and, per request, an upwards-closed
predicate telling which element sets satisfy it. Facility location solutions
also carry an assignment of requests to open facilities; see
:func:`fl_solution_cost`.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from . import graph as G
from .errors import InputError
from .graph import Graph

STEINER_FOREST = "steiner_forest"
STEINER_TREE = "steiner_tree"
MULTICUT = "multicut"
NODE_WEIGHTED = "node_weighted"
STEINER_NETWORK = "steiner_network"
DIRECTED_STEINER = "directed_steiner"
FACILITY_LOCATION = "facility_location"

KINDS = (STEINER_FOREST, STEINER_TREE, MULTICUT, NODE_WEIGHTED,
         STEINER_NETWORK, DIRECTED_STEINER, FACILITY_LOCATION)
NODE_ELEMENT_KINDS = (NODE_WEIGHTED, FACILITY_LOCATION)


@dataclass(frozen=True)
class SteinerPair:
    u: int
    v: int


@dataclass(frozen=True)
class SteinerSubset:
    nodes: Tuple[int, ...]


@dataclass(frozen=True)
class MulticutPair:
    u: int
    v: int


@dataclass(frozen=True)
class MulticutSubset:
    nodes: Tuple[int, ...]


@dataclass(frozen=True)
class NodeWeightedPair:
    u: int
    v: int


@dataclass(frozen=True)
class SteinerNetworkPair:
    u: int
    v: int
    demand: int = 1


@dataclass(frozen=True)
class DirectedRootPath:
    terminal: int


@dataclass(frozen=True)
class FacilityRequest:
    node: int


PAYLOAD_TYPES = {
    "steiner_pair": SteinerPair,
    "steiner_subset": SteinerSubset,
    "multicut_pair": MulticutPair,
    "multicut_subset": MulticutSubset,
    "node_weighted_pair": NodeWeightedPair,
    "steiner_network_pair": SteinerNetworkPair,
    "directed_root_path": DirectedRootPath,
    "facility_request": FacilityRequest,
}
_TYPE_NAMES = {cls: name for name, cls in PAYLOAD_TYPES.items()}

ALLOWED = {
    STEINER_FOREST: (SteinerPair, SteinerSubset),
    STEINER_TREE: (SteinerPair, SteinerSubset),
    MULTICUT: (MulticutPair, MulticutSubset),
    NODE_WEIGHTED: (NodeWeightedPair,),
    STEINER_NETWORK: (SteinerNetworkPair,),
    DIRECTED_STEINER: (DirectedRootPath,),
    FACILITY_LOCATION: (FacilityRequest,),
}


def payload_to_dict(p) -> dict:
    d = {"type": _TYPE_NAMES[type(p)]}
    for k, v in p.__dict__.items():
        d[k] = list(v) if isinstance(v, tuple) else v
    return d


def payload_from_dict(d: Mapping):
    d = dict(d)
    cls = PAYLOAD_TYPES[d.pop("type")]
    if "nodes" in d:
        d["nodes"] = tuple(int(x) for x in d["nodes"])
    return cls(**d)


def payload_nodes(p) -> Tuple[int, ...]:
    if isinstance(p, (SteinerSubset, MulticutSubset)):
        return p.nodes
    if isinstance(p, DirectedRootPath):
        return (p.terminal,)
    if isinstance(p, FacilityRequest):
        return (p.node,)
    return (p.u, p.v)


@dataclass
class ProblemInstance:
    kind: str
    graph: Graph
    root: Optional[int] = None
    # per-instance memo for exact-oracle tables; never compared or serialised
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_elements(self) -> int:
        if self.kind in NODE_ELEMENT_KINDS:
            return self.graph.node_count
        return self.graph.edge_count

    @property
    def element_costs(self) -> List[Fraction]:
        if "costs" not in self.cache:
            if self.kind in NODE_ELEMENT_KINDS:
                nc = self.graph.node_costs or {}
                self.cache["costs"] = [nc.get(v, Fraction(0)) for v in range(self.graph.node_count)]
            else:
                self.cache["costs"] = [e.cost for e in self.graph.edges]
        return self.cache["costs"]

    def cost(self, elements: Iterable[int], zeroed: FrozenSet[int] = frozenset()) -> Fraction:
        c = self.element_costs
        return sum((c[e] for e in set(elements) if e not in zeroed), Fraction(0))

    @property
    def distances(self):
        """All-pairs shortest-path metric under the facility-location weights."""
        if "dist" not in self.cache:
            self.cache["dist"] = G.distance_matrix(self.graph)
        return self.cache["dist"]


def check_payload(instance: ProblemInstance, p) -> None:
    allowed = ALLOWED[instance.kind]
    if not isinstance(p, allowed):
        raise InputError(f"{type(p).__name__} requests do not belong to a {instance.kind} instance")
    n = instance.graph.node_count
    nodes = payload_nodes(p)
    if any(not isinstance(x, int) or not 0 <= x < n for x in nodes):
        raise InputError(f"request {p} names a node outside [0, {n})")
    if isinstance(p, (SteinerSubset, MulticutSubset)) and len(set(nodes)) < 2:
        raise InputError("subset requests need at least two distinct nodes")
    if isinstance(p, SteinerNetworkPair) and p.demand < 1:
        raise InputError("demand must be at least 1")


def satisfies(instance: ProblemInstance, payload, chosen: Iterable[int]) -> bool:
    """Whether the element set ``chosen`` lies in the request's satisfying family."""
    check_payload(instance, payload)
    kind = instance.kind
    if kind == FACILITY_LOCATION:
        raise InputError("facility-location requests are served by assignment, not by element sets")
    g = instance.graph
    chosen = set(chosen)
    if kind in (STEINER_FOREST, STEINER_TREE):
        lab = G.components(g, chosen)
        nodes = payload_nodes(payload)
        return all(lab[x] == lab[nodes[0]] for x in nodes)
    if kind == MULTICUT:
        rest = [i for i in range(g.edge_count) if i not in chosen]
        lab = G.components(g, rest)
        if isinstance(payload, MulticutPair) and payload.u == payload.v:
            return False
        nodes = sorted(set(payload_nodes(payload)))
        return all(lab[a] != lab[b] for a, b in itertools.combinations(nodes, 2))
    if kind == NODE_WEIGHTED:
        if payload.u not in chosen or payload.v not in chosen:
            return False
        induced = [e.id for e in g.edges if e.tail in chosen and e.head in chosen]
        return G.is_pair_connected(g, induced, payload.u, payload.v, respect_direction=False)
    if kind == STEINER_NETWORK:
        if payload.u == payload.v:
            return True
        return G.max_disjoint_paths(g, chosen, payload.u, payload.v) >= payload.demand
    if kind == DIRECTED_STEINER:
        return G.is_pair_connected(g, chosen, instance.root, payload.terminal, respect_direction=True)
    raise InputError(f"unknown problem kind {kind!r}")


@dataclass
class FLSolution:
    facilities: FrozenSet[int]
    assignment: Dict[int, int]  # request id -> facility node

    def __post_init__(self):
        self.facilities = frozenset(self.facilities)
        bad = [q for q, f in self.assignment.items() if f not in self.facilities]
        if bad:
            raise InputError(f"requests {bad} assigned to closed facilities")


def fl_connection_cost(instance: ProblemInstance, assignment: Mapping[int, int],
                       requests: Mapping[int, FacilityRequest]) -> Fraction:
    dist = instance.distances
    total = Fraction(0)
    for q, f in assignment.items():
        d = dist[f][requests[q].node]
        if d is None:
            raise InputError(f"request {q} cannot reach facility {f}")
        total += d
    return total


def fl_solution_cost(instance: ProblemInstance, sol: FLSolution,
                     requests: Mapping[int, FacilityRequest],
                     zeroed: FrozenSet[int] = frozenset()) -> Fraction:
    """Opening cost of the facilities plus connection distance of every request."""
    if set(sol.assignment) != set(requests):
        raise InputError("the assignment must cover exactly the given requests")
    return instance.cost(sol.facilities, zeroed) + fl_connection_cost(instance, sol.assignment, requests)


def validate_instance(instance: ProblemInstance, payloads: Iterable = (),
                      samples: int = 200, seed: int = 0) -> List[str]:
    """Collect every violated instance requirement; an empty list means ok.

    With payloads given and a universe of at most 12 elements, upwards closure
    is spot-checked on random nested pairs ``A ⊆ B``.
    """
    out = []
    if instance.kind not in KINDS:
        return [f"unknown kind {instance.kind!r}"]
    g = instance.graph
    out.extend(g.violations())
    if instance.kind in (STEINER_TREE, DIRECTED_STEINER) and instance.root is None:
        out.append("missing root")
    if instance.root is not None and not 0 <= instance.root < g.node_count:
        out.append("root outside the node range")
    if instance.kind == DIRECTED_STEINER and not g.directed:
        out.append("directed kind needs a directed graph")
    if instance.kind != DIRECTED_STEINER and g.directed:
        out.append(f"{instance.kind} needs an undirected graph")
    if instance.kind in NODE_ELEMENT_KINDS and g.node_costs is None:
        out.append("missing node costs")
    if instance.kind == FACILITY_LOCATION and g.edge_weights is None:
        out.append("missing weights")
    if out:
        return out
    payloads = list(payloads)
    for p in payloads:
        try:
            check_payload(instance, p)
        except InputError as exc:
            out.append(str(exc))
            continue
        if instance.kind == STEINER_TREE and instance.root not in payload_nodes(p):
            out.append(f"steiner-tree request {p} does not contain the root")
    if out or instance.kind == FACILITY_LOCATION or instance.n_elements > 12:
        return out
    rng = random.Random(seed)
    m = instance.n_elements
    for p in payloads:
        for _ in range(samples):
            b = {e for e in range(m) if rng.random() < 0.5}
            a = {e for e in b if rng.random() < 0.5}
            if satisfies(instance, p, a) and not satisfies(instance, p, b):
                out.append(f"request {p} is not upwards-closed: {sorted(a)} satisfies, {sorted(b)} does not")
                break
    return out
