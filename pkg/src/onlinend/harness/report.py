"""Report rows, trace serialization and JSON/CSV emission.

Rationals are written as ``"p/q"`` strings. Wall time is left out unless
asked for, so that two runs of the same input emit identical bytes.
"""
from __future__ import annotations

import csv
import io
import json
from typing import Iterable, List, Optional

from ..delay import DelayServiceRecord
from ..rational import fmt, to_float

FORMAT_VERSION = 1

FIELDS = [
    "name", "mode", "kind", "oracle", "regime", "n_elements", "k", "services",
    "transmission_cost", "delay_cost", "investment", "alg", "opt", "ratio", "ratio_float",
    "envelope", "within_envelope", "checks_passed", "failed_checks", "oracle_calls", "guesses",
]


def _f(x):
    return None if x is None else fmt(x)


def _sorted(xs):
    return sorted(xs)


def service_dict(engine_idx: int, rec) -> dict:
    """A self-contained, JSON-ready view of one service."""
    if isinstance(rec, DelayServiceRecord):
        return {
            "engine": engine_idx,
            "time": fmt(rec.time),
            "level": rec.level,
            "critical": rec.critical,
            "eligible": list(rec.eligible),
            "cleaning": {str(k): fmt(v) for k, v in sorted(rec.cleaning.items())},
            "e0": _sorted(rec.e0),
            "tau": _f(rec.tau),
            "forward_elements": None if rec.forward is None else _sorted(rec.forward.elements),
            "forward_served": None if rec.forward is None else _sorted(rec.forward.served),
            "elements": _sorted(rec.solution.elements),
            "served": list(rec.served),
            "forced": rec.forced,
            "perfect": rec.perfect if rec.level is not None else None,
            "investments": {str(k): fmt(v) for k, v in sorted(rec.investments.items())},
            "penalties_tau": {str(k): fmt(v) for k, v in sorted(rec.penalties_tau.items())},
            "upgraded": list(rec.upgraded),
            "connected": {str(k): v for k, v in sorted(rec.connected.items())},
            "iterations": rec.iterations,
            "costs": {k: fmt(v) for k, v in rec.costs.items()},
        }
    return {
        "engine": engine_idx,
        "time": fmt(rec.time),
        "trigger": rec.trigger,
        "level": rec.level,
        "e0": _sorted(rec.e0),
        "selected": list(rec.selected),
        "last": rec.last,
        "solution": _sorted(rec.solution.elements),
        "transmitted": _sorted(rec.transmitted),
        "served": list(rec.served),
        "upgraded": list(rec.upgraded),
        "assignment": None if rec.fl is None else {str(k): v for k, v in sorted(rec.fl.assignment.items())},
        "costs": {k: fmt(v) for k, v in rec.costs.items()},
    }


def report_row(rep) -> dict:
    ratio = rep.ratio
    failed = sorted(k for k, ok in rep.checks.items() if not ok)
    return {
        "name": rep.name,
        "mode": rep.mode,
        "kind": rep.kind,
        "oracle": rep.oracle,
        "regime": rep.regime,
        "n_elements": rep.n_elements,
        "k": rep.k,
        "services": len(rep.services),
        "transmission_cost": fmt(rep.transmission_cost),
        "delay_cost": fmt(rep.delay_cost),
        "investment": fmt(rep.investment),
        "alg": fmt(rep.alg),
        "opt": _f(rep.opt),
        "ratio": _f(ratio),
        "ratio_float": None if ratio is None else round(to_float(ratio), 9),
        "envelope": round(rep.envelope, 9),
        "within_envelope": rep.within_envelope,
        "checks_passed": not failed,
        "failed_checks": ";".join(failed),
        "oracle_calls": rep.oracle_calls,
        "guesses": " ".join("classic" if g is None else str(g) for g in rep.guesses),
    }


def report_document(reports: Iterable, include_trace: bool = True, include_wall_time: bool = False) -> dict:
    runs = []
    for rep in sorted(reports, key=lambda r: r.name):
        d = report_row(rep)
        d["settings"] = dict(rep.settings)
        d["checks"] = dict(sorted(rep.checks.items()))
        d["violations"] = list(rep.violations)
        d["opt_batches"] = None if rep.opt_batches is None else [
            {"time": fmt(t), "requests": list(g)} for t, g in rep.opt_batches]
        if include_trace:
            d["trace"] = rep.services
        if include_wall_time:
            d["wall_time"] = rep.wall_time
        runs.append(d)
    return {"format_version": FORMAT_VERSION, "fields": FIELDS, "runs": runs}


def emit_report(reports, fmt_name: str = "json", out=None, include_trace: bool = True,
                include_wall_time: bool = False) -> str:
    """Render reports as JSON or CSV; write to ``out`` (path or stream) when given."""
    reports = list(reports)
    if fmt_name == "json":
        text = json.dumps(report_document(reports, include_trace, include_wall_time), indent=1) + "\n"
    elif fmt_name == "csv":
        buf = io.StringIO()
        fields = FIELDS + (["wall_time"] if include_wall_time else [])
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for rep in sorted(reports, key=lambda r: r.name):
            row = report_row(rep)
            if include_wall_time:
                row["wall_time"] = rep.wall_time
            w.writerow(row)
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown report format {fmt_name!r}; use json or csv")
    if out is not None:
        if hasattr(out, "write"):
            out.write(text)
        else:
            with open(out, "w") as fh:
                fh.write(text)
    return text
