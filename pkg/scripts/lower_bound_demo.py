"""Run the engines on the set-cover reduction graphs.

Requests land on element nodes with a chosen release/deadline schedule. The
schedule here is a simple adversary (elements of one set at a time, tight
windows); it illustrates the instances but is not the lower-bound adversary
itself.
"""
import argparse
import random
from fractions import Fraction

from onlinend.harness import SimConfig, gen_set_cover_lb, simulate
from onlinend.harness.generate import set_cover_system


def schedule(i, rounds, rng):
    elements, sets, member = set_cover_system(i)
    out = []
    t = Fraction(0)
    for _ in range(rounds):
        s = rng.randrange(len(sets))
        for x in range(len(elements)):
            if member[s][x]:
                out.append((x, t, Fraction(1)))
        t += 2
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="*", default=[1, 2])
    ap.add_argument("--rounds", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    print(f"{'i':>2} {'reduction':14s} {'mode':8s} {'nodes':>5} {'k':>3} {'ALG':>6} {'OPT':>6} {'ratio':>6}")
    for i in args.sizes:
        sched = schedule(i, args.rounds, rng)
        for red in ("node-weighted", "directed"):
            for mode in ("deadline", "delay"):
                spec = gen_set_cover_lb(i, red, mode, schedule=sched, seed=args.seed)
                small = spec.instance.n_elements <= 20 and spec.k <= 14
                rep = simulate(spec, SimConfig(compute_opt=small))
                opt = "-" if rep.opt is None else f"{float(rep.opt):.2f}"
                ratio = "-" if rep.ratio is None else f"{float(rep.ratio):.2f}"
                print(f"{i:>2} {red:14s} {mode:8s} {spec.instance.graph.node_count:>5} {spec.k:>3} "
                      f"{float(rep.alg):>6.2f} {opt:>6} {ratio:>6}")


if __name__ == "__main__":
    main()
