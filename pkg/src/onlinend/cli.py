"""Command line: ``onlinend run|gen|opt|check``.

    onlinend gen --family steiner_forest --mode delay --seed 3 --out inst.json
    onlinend run inst.json --oracle exact --opt --format csv
    onlinend opt inst.json
    onlinend check inst.json report.json
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CapacityError, ConfigurationError, InfeasibleError, InputError, InvariantViolation
from .harness import (FAMILIES, GenParams, SimConfig, audit_run, emit_report, gen_random,
                      gen_set_cover_lb, load, opt, save, simulate)
from .harness.spec import DEADLINE, DELAY, dumps
from .oracles import ORACLES
from .rational import fmt
from .regime import CLASSIC, REQUEST_BASED


def _add_common(p):
    p.add_argument("--out", help="write here instead of stdout")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="onlinend", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    run = sub.add_parser("run", help="simulate instances and report")
    run.add_argument("instances", nargs="+", type=Path)
    run.add_argument("--mode", choices=(DEADLINE, DELAY),
                     help="refuse instances whose mode differs")
    run.add_argument("--oracle", choices=sorted(ORACLES), default="exact")
    run.add_argument("--regime", choices=(CLASSIC, REQUEST_BASED), default=CLASSIC)
    run.add_argument("--k0", type=int, default=2, help="initial request-count guess")
    run.add_argument("--serve", choices=("satisfied", "selected"), default="satisfied")
    run.add_argument("--opt", action="store_true", help="also compute the offline optimum")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--no-trace", action="store_true")
    run.add_argument("--seed", type=int, help="accepted for symmetry; runs are deterministic")
    _add_common(run)

    gen = sub.add_parser("gen", help="generate an instance")
    gen.add_argument("--family", choices=FAMILIES + ("set_cover_lb",), default="steiner_forest")
    gen.add_argument("--mode", choices=(DEADLINE, DELAY), default=DEADLINE)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--requests", type=int, nargs=2, metavar=("LO", "HI"))
    gen.add_argument("--nodes", type=int, nargs=2, metavar=("LO", "HI"))
    gen.add_argument("--max-elements", type=int)
    gen.add_argument("--lb-size", type=int, default=2, help="i for the set-cover family")
    gen.add_argument("--lb-mode", choices=("node-weighted", "directed"), default="node-weighted")
    _add_common(gen)

    op = sub.add_parser("opt", help="offline optimum only")
    op.add_argument("instance", type=Path)
    op.add_argument("--format", choices=("json", "csv"), default="json")
    _add_common(op)

    chk = sub.add_parser("check", help="audit a saved report against its instance")
    chk.add_argument("instance", type=Path)
    chk.add_argument("report", type=Path)
    chk.add_argument("--no-replay", action="store_true")
    _add_common(chk)
    return ap


def _write(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    reports = []
    for path in args.instances:
        spec = load(path)
        if args.mode and spec.mode != args.mode:
            raise InputError(f"{path}: instance is in {spec.mode} mode, not {args.mode}")
        cfg = SimConfig(oracle=args.oracle, regime=args.regime, k0=args.k0,
                        serve_mode=args.serve, compute_opt=args.opt)
        reports.append(simulate(spec, cfg))
    _write(emit_report(reports, args.format, include_trace=not args.no_trace), args.out)
    return 0 if all(all(r.checks.values()) for r in reports) else 1


def cmd_gen(args) -> int:
    if args.family == "set_cover_lb":
        spec = gen_set_cover_lb(args.lb_size, args.lb_mode, args.mode, seed=args.seed)
    else:
        params = GenParams(family=args.family, mode=args.mode)
        if args.requests:
            params.requests = tuple(args.requests)
        if args.nodes:
            params.nodes = tuple(args.nodes)
        if args.max_elements is not None:
            params.max_elements = args.max_elements
        spec = gen_random(params, args.seed)
    if args.out:
        save(spec, args.out)
    else:
        sys.stdout.write(dumps(spec) + "\n")
    return 0


def cmd_opt(args) -> int:
    spec = load(args.instance)
    res = opt(spec)
    batches = [{"time": fmt(t), "requests": g} for t, g in res.batches]
    if args.format == "json":
        text = json.dumps({"name": spec.name, "opt": fmt(res.cost), "batches": batches}, indent=1) + "\n"
    else:
        text = "name,opt,batches\n" + f"{spec.name},{fmt(res.cost)},{len(batches)}\n"
    _write(text, args.out)
    return 0


def cmd_check(args) -> int:
    spec = load(args.instance)
    doc = json.loads(args.report.read_text())
    runs = [r for r in doc.get("runs", []) if r["name"] == spec.name]
    if not runs:
        raise InputError(f"report has no run named {spec.name!r}")
    problems = []
    for run in runs:
        if "trace" not in run:
            raise InputError("report was written without traces; rerun without --no-trace")
        problems += audit_run(spec, run, replay=not args.no_replay)
    text = "".join(f"FAIL {p}\n" for p in problems) or f"OK {spec.name}\n"
    _write(text, args.out)
    return 1 if problems else 0


COMMANDS = {"run": cmd_run, "gen": cmd_gen, "opt": cmd_opt, "check": cmd_check}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except (InputError, ConfigurationError, InfeasibleError, CapacityError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
