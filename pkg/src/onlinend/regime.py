"""Request-count regime: E0 from cheap singleton solutions, and the guess-squaring controller.

With a guess ``k_hat`` for the number of requests, a service of level l buys
the singleton solutions of pending requests costing at most
``gamma * 2^l / k_hat`` instead of all individually cheap elements. The
controller starts with ``k_hat = 2``; once the active engine has received
``k_hat`` requests it opens a fresh engine with ``k_hat ** 2``, and once the
guess exceeds the universe size it falls back to the classic rule for good.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from . import problems as P
from .deadline import DeadlineEngine, SERVE_SATISFIED
from .delay import DelayEngine
from .errors import ConfigurationError, InputError
from .rational import pow2

DEADLINE = "deadline"
DELAY = "delay"
CLASSIC = "classic"
REQUEST_BASED = "request-based"


def build_E0_by_requests(engine, level, k_hat) -> frozenset:
    """Union of cheap singleton solutions, ascending request id, skipping requests E0 already serves."""
    inst = engine.instance
    if inst.kind == P.FACILITY_LOCATION:
        raise ConfigurationError("the request-based regime does not handle facility location")
    cap = engine.gamma * pow2(level) / k_hat
    e0 = set()
    for q in sorted(engine.pending(), key=lambda q: q.rid):
        # one ascending pass equals the repeat-until-stable loop: E0 only grows,
        # so a request it serves stays served
        if q.single.cost <= cap and not P.satisfies(inst, q.payload, e0):
            e0 |= q.single.elements
    return frozenset(e0)


@dataclass
class Slot:
    """One engine of the controller with the guess that created it.

    ``classic`` engines use the cheap-element rule; ``k_hat`` is then None
    for the classic regime, or the guess that crossed the universe size.
    """
    k_hat: Optional[int]
    classic: bool
    engine: object
    received: List[int] = field(default_factory=list)


class RegimeController:
    """Routes requests to engines.

    In ``classic`` regime there is a single unmodified engine. In
    ``request-based`` regime the guess-squaring rule spawns engines; older
    engines keep running on the requests they already hold.
    """

    def __init__(self, instance, oracle, mode: str = DEADLINE, regime: str = CLASSIC,
                 k0: int = 2, serve_mode: str = SERVE_SATISFIED, check: bool = True):
        if mode not in (DEADLINE, DELAY):
            raise InputError(f"unknown mode {mode!r}")
        if regime not in (CLASSIC, REQUEST_BASED):
            raise InputError(f"unknown regime {regime!r}")
        if regime == REQUEST_BASED and instance.kind == P.FACILITY_LOCATION:
            raise ConfigurationError("the request-based regime does not handle facility location")
        if k0 < 2:
            raise InputError("the initial guess must be at least 2")
        self.instance = instance
        self.oracle = oracle
        self.mode = mode
        self.regime = regime
        self.serve_mode = serve_mode
        self.check = check
        self.slots: List[Slot] = []
        self.owner = {}
        if regime == CLASSIC:
            self._open(None, True)
        else:
            self._open(k0, k0 > instance.n_elements)

    @property
    def engines(self):
        return [s.engine for s in self.slots]

    @property
    def guesses(self) -> List[Optional[int]]:
        return [s.k_hat for s in self.slots]

    def _make_engine(self, k_hat, classic):
        kw = dict(check=self.check)
        if not classic:
            kw["e0_rule"] = lambda eng, level, k=k_hat: build_E0_by_requests(eng, level, k)
            kw["e0_bound"] = self.oracle.gamma
        if self.mode == DEADLINE:
            return DeadlineEngine(self.instance, self.oracle, serve_mode=self.serve_mode, **kw)
        return DelayEngine(self.instance, self.oracle, **kw)

    def _open(self, k_hat, classic):
        self.slots.append(Slot(k_hat, classic, self._make_engine(k_hat, classic)))

    def route(self, rid) -> int:
        """Index of the engine that takes request ``rid``."""
        active = self.slots[-1]
        if not active.classic and len(active.received) >= active.k_hat:
            k = active.k_hat ** 2
            self._open(k, k > self.instance.n_elements)
            active = self.slots[-1]
        active.received.append(rid)
        self.owner[rid] = len(self.slots) - 1
        return len(self.slots) - 1

    def upon_request(self, rid, payload, release, deadline=None, delay=None):
        idx = self.route(rid)
        eng = self.slots[idx].engine
        if self.mode == DEADLINE:
            return eng.upon_request(rid, payload, release, deadline)
        return eng.upon_request(rid, payload, delay, release)
