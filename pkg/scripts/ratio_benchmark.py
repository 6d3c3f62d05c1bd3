"""Measure ALG/OPT over random instances and write a report.

    python3 scripts/ratio_benchmark.py --mode delay --per-family 50 --out ratios.csv --format csv
"""
import argparse
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor

from onlinend.harness import FAMILIES, GenParams, SimConfig, emit_report, gen_random, simulate
from onlinend.oracles import ORACLES
from onlinend.regime import CLASSIC, REQUEST_BASED


def one(job):
    family, mode, seed, oracle, regime = job
    params = GenParams(family=family, mode=mode, max_elements=10, requests=(1, 6))
    spec = gen_random(params, seed)
    return simulate(spec, SimConfig(oracle=oracle, regime=regime, compute_opt=True, check=False))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mode", choices=("deadline", "delay"), default="deadline")
    ap.add_argument("--oracle", choices=sorted(ORACLES), default="exact")
    ap.add_argument("--regime", choices=(CLASSIC, REQUEST_BASED), default=CLASSIC)
    ap.add_argument("--families", nargs="*", default=list(FAMILIES))
    ap.add_argument("--per-family", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("json", "csv"), default="csv")
    args = ap.parse_args(argv)

    jobs = [(f, args.mode, args.seed + i, args.oracle, args.regime)
            for f in args.families for i in range(args.per_family)]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            reports = list(pool.map(one, jobs, chunksize=8))
    else:
        reports = [one(j) for j in jobs]

    emit_report(reports, args.format, out=args.out or sys.stdout, include_trace=False)
    for fam in args.families:
        rs = [float(r.ratio) for r in reports if r.name.startswith(fam + "-") and r.ratio is not None]
        if rs:
            print(f"{fam:24s} n={len(rs):4d} mean={statistics.mean(rs):.3f} max={max(rs):.3f}", file=sys.stderr)
    bad = [r.name for r in reports if not all(r.checks.values())]
    print(f"{len(reports)} runs, {len(bad)} with failed checks", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
