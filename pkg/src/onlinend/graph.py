"""Weighted graph primitives: connectivity, shortest paths, edge-disjoint paths.

Costs and weights are exact rationals. A graph is either entirely directed or
entirely undirected; parallel edges are allowed, self-loops are not.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ConfigurationError, InputError
from .rational import frac


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    cost: Fraction


@dataclass
class Graph:
    node_count: int
    edges: List[Edge]
    directed: bool = False
    node_costs: Optional[Dict[int, Fraction]] = None
    edge_weights: Optional[Dict[int, Fraction]] = None

    @classmethod
    def build(cls, node_count, edges, directed=False, node_costs=None, edge_weights=None):
        """Build from ``(tail, head, cost)`` triples; edge ids are list positions."""
        es = [Edge(i, int(u), int(v), frac(c)) for i, (u, v, c) in enumerate(edges)]
        g = cls(int(node_count), es, bool(directed), _as_map(node_costs), _as_map(edge_weights))
        problems = g.violations()
        if problems:
            raise InputError("; ".join(problems))
        return g

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def violations(self) -> List[str]:
        out = []
        if self.node_count < 1:
            out.append("node_count must be positive")
        for i, e in enumerate(self.edges):
            if e.id != i:
                out.append(f"edge ids must be dense: position {i} has id {e.id}")
            if not (0 <= e.tail < self.node_count and 0 <= e.head < self.node_count):
                out.append(f"edge {e.id} has an endpoint outside [0, {self.node_count})")
            if e.tail == e.head:
                out.append(f"edge {e.id} is a self-loop")
            if e.cost < 0:
                out.append(f"edge {e.id} has negative cost")
        for name, m in (("node cost", self.node_costs), ("edge weight", self.edge_weights)):
            for k, v in (m or {}).items():
                if v < 0:
                    out.append(f"negative {name} at {k}")
        if self.node_costs is not None and set(self.node_costs) != set(range(self.node_count)):
            out.append("node_costs must cover every node")
        if self.edge_weights is not None and set(self.edge_weights) != set(range(len(self.edges))):
            out.append("edge_weights must cover every edge")
        return out

    def neighbours(self, active: Optional[Iterable[int]] = None, respect_direction: bool = True):
        """Adjacency lists ``node -> [(neighbour, edge id)]`` over ``active``."""
        adj: List[List[Tuple[int, int]]] = [[] for _ in range(self.node_count)]
        ids = range(len(self.edges)) if active is None else active
        for i in ids:
            e = self.edges[i]
            adj[e.tail].append((e.head, i))
            if not (self.directed and respect_direction):
                adj[e.head].append((e.tail, i))
        return adj


def _as_map(values):
    if values is None:
        return None
    if isinstance(values, dict):
        return {int(k): frac(v) for k, v in values.items()}
    return {i: frac(v) for i, v in enumerate(values)}


def _check_edges(graph: Graph, active) -> List[int]:
    ids = sorted(set(active))
    for i in ids:
        if not isinstance(i, int) or not 0 <= i < len(graph.edges):
            raise InputError(f"unknown edge id {i!r}")
    return ids


def _check_node(graph: Graph, v) -> None:
    if not isinstance(v, int) or not 0 <= v < graph.node_count:
        raise InputError(f"unknown node {v!r}")


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # smaller root wins so labels are order independent
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def components(graph: Graph, active_edges: Iterable[int]) -> List[int]:
    """Component label per node; a label is the smallest node in its component.

    Direction is ignored (weak components for directed graphs).
    """
    ids = _check_edges(graph, active_edges)
    ds = DisjointSet(graph.node_count)
    for i in ids:
        e = graph.edges[i]
        ds.union(e.tail, e.head)
    return [ds.find(v) for v in range(graph.node_count)]


def is_pair_connected(graph: Graph, active_edges: Iterable[int], u: int, v: int,
                      respect_direction: bool = True) -> bool:
    """True iff ``v`` is reachable from ``u`` using only ``active_edges``."""
    _check_node(graph, u)
    _check_node(graph, v)
    ids = _check_edges(graph, active_edges)
    if u == v:
        return True
    adj = graph.neighbours(ids, respect_direction)
    seen = {u}
    todo = deque([u])
    while todo:
        x = todo.popleft()
        for y, _ in adj[x]:
            if y == v:
                return True
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return False


def shortest_dist(graph: Graph, u: int, v: int) -> Optional[Fraction]:
    """Weight of a lightest u-v path under ``edge_weights``; ``None`` if unreachable."""
    return shortest_dists_from(graph, u).get(v)


def shortest_dists_from(graph: Graph, u: int) -> Dict[int, Fraction]:
    if graph.edge_weights is None:
        raise ConfigurationError("shortest paths need edge_weights")
    _check_node(graph, u)
    adj = graph.neighbours()
    dist = {u: Fraction(0)}
    heap = [(Fraction(0), u)]
    done = set()
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for y, i in adj[x]:
            nd = d + graph.edge_weights[i]
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


def distance_matrix(graph: Graph) -> List[List[Optional[Fraction]]]:
    rows = []
    for u in range(graph.node_count):
        d = shortest_dists_from(graph, u)
        rows.append([d.get(v) for v in range(graph.node_count)])
    return rows


def max_disjoint_paths(graph: Graph, active_edges: Iterable[int], u: int, v: int) -> int:
    """Maximum number of pairwise edge-disjoint u-v paths over ``active_edges``.

    Unit-capacity augmenting paths. An undirected edge becomes two opposite
    arcs sharing one unit; pushing along one direction frees the other, so
    every undirected edge carries flow at most once in total.
    """
    _check_node(graph, u)
    _check_node(graph, v)
    if u == v:
        raise InputError("max_disjoint_paths needs distinct endpoints")
    ids = _check_edges(graph, active_edges)
    # residual capacities keyed by (x, y); parallel edges accumulate
    cap: Dict[Tuple[int, int], int] = {}
    adj: List[set] = [set() for _ in range(graph.node_count)]
    for i in ids:
        e = graph.edges[i]
        a, b = e.tail, e.head
        cap[(a, b)] = cap.get((a, b), 0) + 1
        cap.setdefault((b, a), 0)
        if not graph.directed:
            cap[(b, a)] += 1
        adj[a].add(b)
        adj[b].add(a)
    flow = 0
    while True:
        prev = {u: None}
        todo = deque([u])
        while todo and v not in prev:
            x = todo.popleft()
            for y in sorted(adj[x]):
                if y not in prev and cap[(x, y)] > 0:
                    prev[y] = x
                    todo.append(y)
        if v not in prev:
            return flow
        y = v
        while prev[y] is not None:
            x = prev[y]
            cap[(x, y)] -= 1
            cap[(y, x)] += 1
            y = x
        flow += 1
