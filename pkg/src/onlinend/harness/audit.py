"""Independent audit of a saved run against its instance file.

Everything is recomputed from the trace and the instance alone: element
costs, per-service budgets, who was served when, and the counter totals
that bound the delay. Optionally the run is replayed and the traces
compared.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List

from ..oracles import ORACLES
from ..rational import frac, pow2
from .spec import DEADLINE, InstanceSpec

ZERO = Fraction(0)


def _gamma(oracle_name):
    return ORACLES[oracle_name].gamma


def _e0_factor(run, engine_idx, n_elements, gamma):
    if run["regime"] == "classic":
        return Fraction(1)
    g = run["guesses"].split()[engine_idx]
    return Fraction(1) if int(g) > n_elements else gamma


def audit_run(spec: InstanceSpec, run: dict, replay: bool = True) -> List[str]:
    """Problems found in one report run (an empty list means it checks out)."""
    out = []
    inst = spec.instance
    gamma = _gamma(run["oracle"])
    by_id = {r.rid: r for r in spec.requests}
    served_at = {}
    counters = {r.rid: ZERO for r in spec.requests}
    transmission = ZERO
    for i, s in enumerate(run.get("trace", [])):
        t = frac(s["time"])
        costs = {k: frac(v) for k, v in s["costs"].items()}
        for r in s["served"]:
            if r in served_at:
                out.append(f"service {i}: request {r} served twice")
            served_at[r] = t
        if frac(costs["e0"]) != inst.cost(s["e0"]):
            out.append(f"service {i}: E0 cost {costs['e0']} != {inst.cost(s['e0'])}")
        level = s["level"]
        if spec.mode == DEADLINE:
            transmission += costs["total"]
            if run["kind"] != "facility_location" and costs["total"] != inst.cost(s["transmitted"]):
                out.append(f"service {i}: total {costs['total']} != cost of transmitted set")
            if level is not None:
                unit = pow2(level)
                f = _e0_factor(run, s["engine"], inst.n_elements, gamma)
                if costs["e0"] > f * unit or costs["solution"] >= gamma * unit \
                        or costs["single"] >= 2 * gamma * unit or costs["total"] > (f + 3 * gamma) * unit:
                    out.append(f"service {i}: budget exceeded at level {level}")
        else:
            transmission += costs["e0"] + costs["solution"] + costs["snippet_connection"]
            for k, v in s["cleaning"].items():
                counters[int(k)] += frac(v)
            for k, v in s["investments"].items():
                counters[int(k)] += frac(v)
            if level is not None:
                unit = pow2(level)
                f = _e0_factor(run, s["engine"], inst.n_elements, gamma)
                body = costs["total"] - costs["snippet_connection"]
                if costs["clean"] > unit or costs["e0"] > f * unit or costs["pc"] > 2 * gamma * unit \
                        or body > (1 + f + 4 * gamma) * unit:
                    out.append(f"service {i}: budget exceeded at level {level}")
                if not s["served"]:
                    out.append(f"service {i}: served nothing")
    missing = sorted(set(by_id) - set(served_at))
    if missing:
        out.append(f"requests never served: {missing}")
    if transmission != frac(run["transmission_cost"]):
        out.append(f"transmission cost {run['transmission_cost']} != trace total {transmission}")
    if spec.mode == DEADLINE:
        late = sorted(r for r, t in served_at.items() if t > by_id[r].deadline or t < by_id[r].release)
        if late:
            out.append(f"requests served outside their windows: {late}")
    else:
        delay = sum((by_id[r].delay(t) for r, t in served_at.items()), ZERO)
        if delay != frac(run["delay_cost"]):
            out.append(f"delay cost {run['delay_cost']} != recomputed {delay}")
        if delay > sum(counters.values(), ZERO):
            out.append("realized delay exceeds the investment counters")
    if replay:
        from .simulate import SimConfig, simulate
        from .report import report_row
        st = run.get("settings", {})
        cfg = SimConfig(oracle=run["oracle"], regime=run["regime"], check=False,
                        k0=st.get("k0", 2), serve_mode=st.get("serve_mode", "satisfied"))
        rep = simulate(spec, cfg)
        if rep.services != run.get("trace", rep.services):
            out.append("replay produced a different trace")
        if report_row(rep)["alg"] != run["alg"]:
            out.append("replay produced a different total cost")
    return out
