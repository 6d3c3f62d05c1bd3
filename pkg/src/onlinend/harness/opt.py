"""Clairvoyant offline optima by set-partition dynamic programming.

An offline solution is a set of transmissions; each transmission serves a
group of requests at one instant. With deadlines the group must share a
common time (max release <= min deadline). With delay it is never worse to
send a group at its last release, because delays are nondecreasing, so a
group ``B`` costs ``ND*(B) + sum_q d_q(max_release(B))``.

Group costs for all ``2^k`` groups come from one pass over the element
masks: every mask is bucketed by the set of requests it satisfies, and a
superset-minimum transform turns bucket minima into ``ND*`` of each group.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from .. import problems as P
from ..errors import CapacityError
from ..oracles.exact import DEFAULT_CAP, ExactOracle
from ..oracles import tables as T
from .spec import DEADLINE, InstanceSpec

MAX_REQUESTS = 14
ZERO = Fraction(0)


@dataclass
class OptResult:
    cost: Fraction
    batches: List[Tuple[Fraction, List[int]]] = field(default_factory=list)


def _check_caps(spec, cap):
    if spec.k > MAX_REQUESTS:
        raise CapacityError(f"offline optimum is capped at {MAX_REQUESTS} requests (got {spec.k})")
    if spec.instance.n_elements > cap:
        raise CapacityError(f"offline optimum is capped at {cap} elements (got {spec.instance.n_elements})")


def group_costs(instance, payloads, cap: int = DEFAULT_CAP) -> List:
    """``ND*`` of every group of ``payloads`` (indexed by bitmask); None if unsatisfiable."""
    k = len(payloads)
    if instance.kind == P.FACILITY_LOCATION:
        ex = ExactOracle(cap)
        out = [ZERO]
        for g in range(1, 1 << k):
            reqs = {i: payloads[i] for i in range(k) if g >> i & 1}
            out.append(ex.nd(instance, reqs).cost)
        return out
    costs = T.mask_costs(instance)
    _, scale = T.int_costs(instance)
    pattern = np.zeros(len(costs), dtype=np.int64)
    for i, p in enumerate(payloads):
        pattern |= T.satisfaction_table(instance, p, cap).astype(np.int64) << i
    big = int(costs.max()) + 1
    best = np.full(1 << k, big, dtype=object if costs.dtype == object else np.int64)
    np.minimum.at(best, pattern, costs)
    idx = np.arange(1 << k)
    for i in range(k):
        lo = idx[(idx >> i & 1) == 0]
        best[lo] = np.minimum(best[lo], best[lo | (1 << i)])
    return [None if int(b) == big else Fraction(int(b), scale) for b in best]


def _partition(k, cost) -> OptResult:
    """Min-cost partition of ``range(k)`` into groups with finite ``cost[group]``."""
    full = (1 << k) - 1
    f: List = [None] * (1 << k)
    choice = [0] * (1 << k)
    f[0] = ZERO
    for s in range(1, full + 1):
        low = s & -s
        rest = s ^ low
        sub = rest
        best, arg = None, 0
        while True:
            g = sub | low
            c = cost[g]
            if c is not None and f[s ^ g] is not None:
                v = c + f[s ^ g]
                if best is None or v < best:
                    best, arg = v, g
            if sub == 0:
                break
            sub = (sub - 1) & rest
        f[s] = best
        choice[s] = arg
    groups = []
    s = full
    while s:
        g = choice[s]
        groups.append([i for i in range(k) if g >> i & 1])
        s ^= g
    return OptResult(f[full], groups)


def opt_deadline(spec: InstanceSpec, cap: int = DEFAULT_CAP) -> OptResult:
    _check_caps(spec, cap)
    reqs = spec.requests
    k = len(reqs)
    if k == 0:
        return OptResult(ZERO, [])
    nd = group_costs(spec.instance, [r.payload for r in reqs], cap)
    cost = [None] * (1 << k)
    for g in range(1, 1 << k):
        members = [reqs[i] for i in range(k) if g >> i & 1]
        t = max(r.release for r in members)
        if t <= min(r.deadline for r in members) and nd[g] is not None:
            cost[g] = nd[g]
    res = _partition(k, cost)
    res.batches = _batches(reqs, res.batches)
    return res


def opt_delay(spec: InstanceSpec, cap: int = DEFAULT_CAP) -> OptResult:
    _check_caps(spec, cap)
    reqs = spec.requests
    k = len(reqs)
    if k == 0:
        return OptResult(ZERO, [])
    nd = group_costs(spec.instance, [r.payload for r in reqs], cap)
    cost = [None] * (1 << k)
    for g in range(1, 1 << k):
        members = [reqs[i] for i in range(k) if g >> i & 1]
        t = max(r.release for r in members)
        if nd[g] is not None:
            cost[g] = nd[g] + sum((r.delay(t) for r in members), ZERO)
    res = _partition(k, cost)
    res.batches = _batches(reqs, res.batches)
    return res


def _batches(reqs, groups):
    out = []
    for g in groups:
        t = max(reqs[i].release for i in g)
        out.append((t, sorted(reqs[i].rid for i in g)))
    return sorted(out)


def opt(spec: InstanceSpec, cap: int = DEFAULT_CAP) -> OptResult:
    return opt_deadline(spec, cap) if spec.mode == DEADLINE else opt_delay(spec, cap)
