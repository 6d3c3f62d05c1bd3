"""Event-driven simulation of the online engines, with run-level audits."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from ..deadline import SERVE_SATISFIED
from ..errors import ConfigurationError
from ..oracles import make_oracle
from ..oracles.exact import ExactOracle
from ..rational import pow2
from ..regime import CLASSIC, RegimeController
from .opt import opt
from .spec import DEADLINE, DELAY, InstanceSpec

ZERO = Fraction(0)


@dataclass
class SimConfig:
    oracle: str = "exact"
    regime: str = CLASSIC
    k0: int = 2
    serve_mode: str = SERVE_SATISFIED
    check: bool = True          # raise on the first engine invariant violation
    audit_oracle: bool = False  # re-itemize every oracle answer
    compute_opt: bool = False
    certify: Optional[bool] = None  # imperfect-service certificates; default: exact oracle only
    breakpoint_checks: bool = True


@dataclass
class RunReport:
    name: str
    mode: str
    oracle: str
    regime: str
    kind: str
    n_elements: int
    k: int
    services: List[dict]
    transmission_cost: Fraction
    delay_cost: Fraction
    investment: Fraction
    alg: Fraction
    opt: Optional[Fraction] = None
    opt_batches: Optional[list] = None
    checks: Dict[str, bool] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)
    oracle_calls: int = 0
    guesses: List[Optional[int]] = field(default_factory=list)
    settings: Dict[str, object] = field(default_factory=dict)
    wall_time: float = 0.0
    records: list = field(default_factory=list, repr=False)

    @property
    def ratio(self) -> Optional[Fraction]:
        if self.opt is None:
            return None
        if self.opt == 0:
            return Fraction(1) if self.alg == 0 else None
        return self.alg / self.opt

    @property
    def envelope(self) -> float:
        return 32 * (1 + math.log2(max(self.n_elements, 1)))

    @property
    def within_envelope(self) -> Optional[bool]:
        if self.opt is None:
            return None
        r = self.ratio
        return r is not None and float(r) <= self.envelope


def _check(report, name, ok, msg=None):
    report.checks[name] = report.checks.get(name, True) and bool(ok)
    if not ok and msg:
        report.violations.append(msg)


def make_controller(spec: InstanceSpec, config: SimConfig):
    oracle = make_oracle(config.oracle, audit=config.audit_oracle)
    oracle.check_kind(spec.instance)
    if spec.mode == DELAY and not oracle.prize_collecting:
        raise ConfigurationError(f"oracle {config.oracle!r} has no prize-collecting mode; delay needs one")
    return oracle, RegimeController(spec.instance, oracle, spec.mode, config.regime, config.k0,
                                    config.serve_mode, config.check)


def simulate(spec: InstanceSpec, config: Optional[SimConfig] = None) -> RunReport:
    config = config or SimConfig()
    spec.validate()
    started = time.perf_counter()
    oracle, ctl = make_controller(spec, config)
    if spec.mode == DEADLINE:
        _run_deadline(spec, ctl)
    else:
        _run_delay(spec, ctl, config)
    report = _report(spec, config, oracle, ctl)
    if config.compute_opt:
        res = opt(spec)
        report.opt = res.cost
        report.opt_batches = res.batches
        _check(report, "opt_below_alg", res.cost <= report.alg, f"OPT {res.cost} exceeds ALG {report.alg}")
    report.wall_time = time.perf_counter() - started
    return report


def _releases(spec):
    return sorted(spec.requests, key=lambda r: (r.release, r.rid))


def _run_deadline(spec, ctl):
    reqs = _releases(spec)
    i = 0
    while True:
        nxt = None
        for idx, eng in enumerate(ctl.engines):
            d = eng.next_deadline()
            if d is not None and (nxt is None or d < nxt[:2]):
                nxt = (d[0], d[1], idx)
        if i < len(reqs) and (nxt is None or reqs[i].release <= nxt[0]):
            t = reqs[i].release
            while i < len(reqs) and reqs[i].release == t:
                r = reqs[i]
                ctl.upon_request(r.rid, r.payload, r.release, deadline=r.deadline)
                i += 1
            continue
        if nxt is None:
            break
        t, rid, idx = nxt
        ctl.engines[idx].run_deadline_service(rid, t)


def _breakpoints(eng, lo, hi):
    out = set()
    for q in eng.pending():
        for x in q.delay.times:
            if lo < x < hi:
                out.add(x)
    return sorted(out)


def _run_delay(spec, ctl, config):
    reqs = _releases(spec)
    i = 0
    now = reqs[0].release if reqs else ZERO
    while True:
        crit = None
        for idx, eng in enumerate(ctl.engines):
            c = eng.next_critical_time(now)
            if c is not None and (crit is None or (c[0], c[1], idx) < crit):
                crit = (c[0], c[1], idx)
        release_first = i < len(reqs) and (crit is None or reqs[i].release <= crit[0])
        target = reqs[i].release if release_first else (crit[0] if crit else None)
        if target is None:
            break
        if config.breakpoint_checks:
            for eng in ctl.engines:
                for x in _breakpoints(eng, now, target) + [target]:
                    eng.check_invariant(x)
        now = target
        if release_first:
            while i < len(reqs) and reqs[i].release == now:
                r = reqs[i]
                ctl.upon_request(r.rid, r.payload, r.release, delay=r.delay)
                i += 1
            continue
        t, j, idx = crit
        ctl.engines[idx].run_critical_service(j, t)


def _certificate(spec, eng, rec) -> Optional[bool]:
    """Exact PCND* under the forwarding-time penalties is at least 2^level."""
    if rec.level is None or rec.perfect:
        return None
    reqs = {r: eng.requests[r].payload for r in rec.eligible}
    best = ExactOracle().pcnd(spec.instance, reqs, rec.penalties_tau, rec.e0)
    return best.cost >= pow2(rec.level)


def _report(spec, config, oracle, ctl) -> RunReport:
    from .report import service_dict

    records = []
    for idx, eng in enumerate(ctl.engines):
        records.extend((idx, rec) for rec in eng.records)
    records.sort(key=lambda x: (x[1].time, x[0]))
    transmission = sum((eng.transmission_cost() for eng in ctl.engines), ZERO)
    rep = RunReport(spec.name, spec.mode, config.oracle, config.regime, spec.instance.kind,
                    spec.instance.n_elements, spec.k, [service_dict(idx, r) for idx, r in records],
                    transmission, ZERO, ZERO, transmission, oracle_calls=oracle.calls,
                    guesses=ctl.guesses, records=records,
                    settings={"k0": config.k0, "serve_mode": config.serve_mode})
    served_all = all(not q.pending for eng in ctl.engines for q in eng.requests.values())
    _check(rep, "all_served", served_all, "some request was never served")
    budget_msgs = [m for eng in ctl.engines for rec in eng.records for m in eng.budget_problems(rec)]
    _check(rep, "budgets", not budget_msgs, "; ".join(budget_msgs))
    if spec.mode == DEADLINE:
        late = [q.rid for eng in ctl.engines for q in eng.requests.values()
                if q.served_at is None or q.served_at > q.deadline]
        _check(rep, "deadlines_met", not late, f"requests {late} missed their deadlines")
        return rep
    rep.delay_cost = sum((eng.delay_cost() for eng in ctl.engines), ZERO)
    rep.investment = sum((eng.total_investment() for eng in ctl.engines), ZERO)
    rep.alg = rep.transmission_cost + rep.delay_cost
    _check(rep, "delay_within_investment", rep.delay_cost <= rep.investment,
           f"delay {rep.delay_cost} exceeds total investment {rep.investment}")
    fails = [m for eng in ctl.engines for m in eng.invariant_failures]
    _check(rep, "invariant1", not fails, "; ".join(fails))
    certify = config.certify if config.certify is not None else config.oracle == "exact"
    if certify and spec.instance.n_elements <= 20:
        for idx, rec in records:
            ok = _certificate(spec, ctl.engines[idx], rec)
            if ok is not None:
                _check(rep, "forward_certificate", ok, f"imperfect service at {rec.time} lacks its certificate")
    return rep
