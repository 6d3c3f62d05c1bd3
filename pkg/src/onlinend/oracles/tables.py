"""Whole-universe satisfaction tables for exact enumeration.

For a universe of ``m`` elements every subset is a bitmask in ``[0, 2**m)``.
The tables below evaluate a request's predicate on all masks at once with
numpy, building connectivity labels incrementally: the masks whose highest
bit is ``i`` are the masks below ``2**i`` plus element ``i``.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .. import problems as P
from ..errors import CapacityError

INT64_SAFE = 2 ** 62


def common_scale(values):
    """Least common denominator of a collection of finite rationals."""
    lcm = 1
    for v in values:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    return lcm


def subset_sums(values, dtype=np.int64) -> np.ndarray:
    """``out[mask] = sum(values[i] for i in mask)``."""
    out = np.zeros(1, dtype=dtype)
    for v in values:
        out = np.concatenate([out, out + v])
    return out


def _tables(instance):
    t = instance.cache.get("tables")
    if t is None:
        t = instance.cache["tables"] = {}
    return t


def _check_cap(instance, cap):
    if instance.n_elements > cap:
        raise CapacityError(f"exact enumeration is capped at {cap} elements, instance has {instance.n_elements}")


def edge_labels(instance, complement=False) -> np.ndarray:
    """Component label of every node for every edge mask (direction ignored)."""
    t = _tables(instance)
    if "labels" not in t:
        g = instance.graph
        n = g.node_count
        dt = np.int8 if n < 127 else np.int32
        lab = np.arange(n, dtype=dt)[None, :]
        for e in g.edges:
            la = lab[:, e.tail][:, None]
            lb = lab[:, e.head][:, None]
            lab = np.concatenate([lab, np.where(lab == lb, la, lab)])
        t["labels"] = lab
    lab = t["labels"]
    if complement:
        full = (1 << instance.graph.edge_count) - 1
        return lab[full ^ np.arange(len(lab))]
    return lab


def node_labels(instance) -> np.ndarray:
    """Component labels in the subgraph induced by each node mask; absent nodes stay isolated."""
    t = _tables(instance)
    if "node_labels" not in t:
        g = instance.graph
        n = g.node_count
        dt = np.int8 if n < 127 else np.int32
        nbrs = [set() for _ in range(n)]
        for e in g.edges:
            nbrs[e.tail].add(e.head)
            nbrs[e.head].add(e.tail)
        lab = np.arange(n, dtype=dt)[None, :]
        for i in range(n):
            block = lab.copy()
            idx = np.arange(len(block))
            for j in sorted(x for x in nbrs[i] if x < i):
                present = ((idx >> j) & 1).astype(bool)[:, None]
                li = block[:, i][:, None]
                lj = block[:, j][:, None]
                block = np.where(present & (block == lj), li, block)
            lab = np.concatenate([lab, block])
        t["node_labels"] = lab
    return t["node_labels"]


def reach_table(instance) -> np.ndarray:
    """``reach[mask, v]``: v reachable from the root along the arcs in mask."""
    t = _tables(instance)
    if "reach" not in t:
        g = instance.graph
        size = 1 << g.edge_count
        idx = np.arange(size)
        reach = np.zeros((size, g.node_count), dtype=bool)
        reach[:, instance.root] = True
        bits = [((idx >> e.id) & 1).astype(bool) for e in g.edges]
        changed = True
        while changed:
            changed = False
            for e in g.edges:
                new = reach[:, e.tail] & bits[e.id] & ~reach[:, e.head]
                if new.any():
                    reach[:, e.head] |= new
                    changed = True
        t["reach"] = reach
    return t["reach"]


def _pairs_connected(lab, nodes):
    first = lab[:, nodes[0]]
    ok = np.ones(len(lab), dtype=bool)
    for x in nodes[1:]:
        ok &= lab[:, x] == first
    return ok


def _network_table(instance, u, v, demand):
    # lambda(u,v) >= f  iff  connected and, for every chosen edge e,
    # lambda(u,v) >= f-1 without e (Menger)
    t = _tables(instance)
    key = ("network", min(u, v), max(u, v), demand)
    if key in t:
        return t[key]
    conn = _pairs_connected(edge_labels(instance), (u, v))
    if demand <= 1:
        t[key] = conn
        return conn
    prev = _network_table(instance, u, v, demand - 1)
    idx = np.arange(len(conn))
    ok = conn.copy()
    for i in range(instance.graph.edge_count):
        has = ((idx >> i) & 1).astype(bool)
        ok &= ~has | prev[idx ^ (1 << i)]
    t[key] = ok
    return ok


def satisfaction_table(instance, payload, cap: int = 20) -> np.ndarray:
    """Boolean array over all element masks: does the mask satisfy ``payload``?"""
    _check_cap(instance, cap)
    t = _tables(instance)
    key = ("sat", payload)
    if key in t:
        return t[key]
    P.check_payload(instance, payload)
    kind = instance.kind
    if kind in (P.STEINER_FOREST, P.STEINER_TREE):
        out = _pairs_connected(edge_labels(instance), P.payload_nodes(payload))
    elif kind == P.MULTICUT:
        lab = edge_labels(instance, complement=True)
        nodes = sorted(set(P.payload_nodes(payload)))
        if isinstance(payload, P.MulticutPair) and payload.u == payload.v:
            out = np.zeros(len(lab), dtype=bool)
        else:
            out = np.ones(len(lab), dtype=bool)
            for a_i, a in enumerate(nodes):
                for b in nodes[a_i + 1:]:
                    out &= lab[:, a] != lab[:, b]
    elif kind == P.NODE_WEIGHTED:
        lab = node_labels(instance)
        idx = np.arange(len(lab))
        u, v = payload.u, payload.v
        out = (((idx >> u) & 1) & ((idx >> v) & 1)).astype(bool) & (lab[:, u] == lab[:, v])
    elif kind == P.STEINER_NETWORK:
        if payload.u == payload.v:
            out = np.ones(1 << instance.n_elements, dtype=bool)
        else:
            out = _network_table(instance, payload.u, payload.v, payload.demand)
    elif kind == P.DIRECTED_STEINER:
        out = reach_table(instance)[:, payload.terminal]
    else:
        raise ValueError(f"no satisfaction table for {kind}")
    t[key] = out
    return out


def int_costs(instance):
    """Element costs scaled to integers, with the scale."""
    t = _tables(instance)
    if "int_costs" not in t:
        costs = instance.element_costs
        scale = common_scale(costs)
        ints = [int(c * scale) for c in costs]
        t["int_costs"] = (ints, scale)
    return t["int_costs"]


def mask_costs(instance) -> np.ndarray:
    t = _tables(instance)
    if "mask_costs" not in t:
        ints, _ = int_costs(instance)
        dtype = np.int64 if sum(ints) < INT64_SAFE >> instance.n_elements else object
        t["mask_costs"] = subset_sums(ints, dtype)
    return t["mask_costs"]


def mask_of(elements) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: int):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)
