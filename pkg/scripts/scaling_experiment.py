"""Discrepancy of the solver and of random signs as n grows.

Writes one CSV row per (family, n) with both discrepancies normalized by
sqrt(n) and by sigma.
"""

import argparse
import csv
import math
import sys
import time

import numpy as np

from specbal.baselines import random_coloring_stats
from specbal.full import solve
from specbal.instance import default_low_rank, generate_diagonal_spencer, generate_low_rank_random
from specbal.partial import PartialColoringConfig


def build(family, n, seed):
    if family == "diagonal":
        return generate_diagonal_spencer(n, n, seed)
    return generate_low_rank_random(n, n, default_low_rank(n), seed)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128, 256])
    ap.add_argument("--families", nargs="+", default=["diagonal", "low-rank"])
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--c-bound", type=float, default=2.0)
    args = ap.parse_args(argv)

    cfg = PartialColoringConfig(c_bound=args.c_bound)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["family", "n", "sigma", "solver", "solver_sqrt_n", "random", "random_sqrt_n",
                  "random_sigma", "rounds", "seconds"])
    for family in args.families:
        for n in args.sizes:
            inst = build(family, n, n)
            t0 = time.perf_counter()
            rep = solve(inst, cfg, rng=np.random.default_rng(args.seed))
            secs = time.perf_counter() - t0
            mean, _ = random_coloring_stats(inst, args.samples, np.random.default_rng(n))
            sigma = rep.params.sigma
            out.writerow([family, n, f"{sigma:.4f}", f"{rep.discrepancy:.4f}",
                          f"{rep.discrepancy / math.sqrt(n):.4f}", f"{mean:.4f}",
                          f"{mean / math.sqrt(n):.4f}", f"{mean / sigma:.4f}", rep.rounds, f"{secs:.1f}"])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
