from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, Mapping, Optional

from .. import problems as P
from ..errors import InputError, InvariantViolation
from ..problems import FLSolution, ProblemInstance
from ..rational import INF


@dataclass(frozen=True)
class CostOverride:
    """Elements whose cost is treated as zero for one oracle call."""
    zeroed: FrozenSet[int] = frozenset()


@dataclass
class OfflineSolution:
    elements: FrozenSet[int]
    served: FrozenSet[int]
    element_cost: Fraction
    penalty_cost: object = Fraction(0)  # Fraction, or INF when an infinite penalty is paid
    connection_cost: Fraction = Fraction(0)
    fl: Optional[FLSolution] = None

    @property
    def cost(self):
        return self.element_cost + self.connection_cost + self.penalty_cost

    def serves(self, rid) -> bool:
        return rid in self.served


EMPTY = OfflineSolution(frozenset(), frozenset(), Fraction(0))


def itemize(instance: ProblemInstance, requests, elements, zeroed, penalties=None, fl=None,
            served=None) -> OfflineSolution:
    """Recompute a solution's cost from scratch (element prices under the override,
    connection distances, and penalties of every unserved request)."""
    elements = frozenset(elements)
    if instance.kind == P.FACILITY_LOCATION:
        fl = fl or FLSolution(elements, {})
        served = frozenset(fl.assignment)
        conn = P.fl_connection_cost(instance, fl.assignment, {q: requests[q] for q in fl.assignment})
    else:
        conn = Fraction(0)
        if served is None:
            served = frozenset(q for q, p in requests.items() if P.satisfies(instance, p, elements | zeroed))
    pen = Fraction(0)
    for q in requests:
        if q not in served:
            pen = pen + (penalties[q] if penalties is not None else INF)
    return OfflineSolution(elements, frozenset(served), instance.cost(elements, zeroed), pen, conn, fl)


class Oracle:
    """Offline (prize-collecting) solver.

    ``nd`` solves the plain problem for every request; ``pcnd`` may leave
    requests unserved at their penalty. ``gamma`` is the approximation factor
    the online frameworks divide and multiply by.
    """

    name = "oracle"
    gamma = Fraction(1)
    prize_collecting = False
    native_nd = True
    kinds = P.KINDS

    def __init__(self):
        self.calls = 0
        self._lock = threading.Lock()

    def _count(self):
        with self._lock:
            self.calls += 1

    def check_kind(self, instance):
        if instance.kind not in self.kinds:
            raise InputError(f"oracle {self.name!r} does not handle {instance.kind} instances")

    def nd(self, instance, requests, zeroed=frozenset()) -> OfflineSolution:
        raise NotImplementedError

    def pcnd(self, instance, requests, penalties, zeroed=frozenset()) -> OfflineSolution:
        raise InputError(f"oracle {self.name!r} is not prize-collecting")

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} gamma={self.gamma}>"


def nd_of(oracle: Oracle, instance, requests: Mapping, zeroed=frozenset()) -> OfflineSolution:
    """Plain ND answer; PC-only oracles are called with every penalty infinite."""
    if isinstance(zeroed, CostOverride):
        zeroed = zeroed.zeroed
    zeroed = frozenset(zeroed)
    if oracle.native_nd:
        return oracle.nd(instance, requests, zeroed)
    return oracle.pcnd(instance, requests, {q: INF for q in requests}, zeroed)


class AuditedOracle(Oracle):
    """Wraps an oracle and re-verifies every answer it gives.

    Checks that the reported cost matches a from-scratch itemization and that
    plain answers really satisfy every request.
    """

    def __init__(self, inner: Oracle):
        super().__init__()
        self.inner = inner
        self.name = inner.name
        self.gamma = inner.gamma
        self.prize_collecting = inner.prize_collecting
        self.native_nd = inner.native_nd
        self.kinds = inner.kinds

    def _audit(self, instance, requests, sol, zeroed, penalties):
        again = itemize(instance, requests, sol.elements, zeroed, penalties, sol.fl)
        if instance.kind != P.FACILITY_LOCATION and not sol.served <= again.served:
            raise InvariantViolation(f"{self.name}: claims to serve {set(sol.served - again.served)}")
        if instance.kind != P.FACILITY_LOCATION:
            # price exactly what the oracle claims to serve
            again = itemize(instance, requests, sol.elements, zeroed, penalties, served=sol.served)
        if sol.cost != again.cost:
            raise InvariantViolation(f"{self.name}: reported cost {sol.cost} but itemization gives {again.cost}")
        if penalties is None or all(v == INF for v in penalties.values()):
            if again.served != frozenset(requests):
                raise InvariantViolation(f"{self.name}: plain answer leaves {set(requests) - again.served} unserved")
        return sol

    def nd(self, instance, requests, zeroed=frozenset()):
        self._count()
        sol = self.inner.nd(instance, requests, zeroed)
        return self._audit(instance, requests, sol, frozenset(zeroed), None)

    def pcnd(self, instance, requests, penalties, zeroed=frozenset()):
        self._count()
        sol = self.inner.pcnd(instance, requests, penalties, zeroed)
        return self._audit(instance, requests, sol, frozenset(zeroed), penalties)
