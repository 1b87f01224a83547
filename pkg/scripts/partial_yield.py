"""Distribution of frozen coordinates per partial-coloring round."""

import argparse

import numpy as np

from specbal.concentration import concentration_params
from specbal.instance import generate_diagonal_spencer, generate_low_rank_random
from specbal.partial import PartialColoringConfig, partial_color


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=["diagonal", "low-rank"], default="low-rank")
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--r", type=int, default=4)
    ap.add_argument("--runs", type=int, default=50)
    ap.add_argument("--c-bound", type=float, default=2.0)
    args = ap.parse_args(argv)

    cfg = PartialColoringConfig(c_bound=args.c_bound)
    counts, ratios, restarts = [], [], []
    for s in range(args.runs):
        if args.family == "diagonal":
            inst = generate_diagonal_spencer(args.n, args.n, 100 + s)
        else:
            inst = generate_low_rank_random(args.n, args.n, args.r, 100 + s)
        res = partial_color(inst, np.zeros(args.n), concentration_params(inst), cfg, np.random.default_rng(s))
        counts.append(len(res.frozen))
        ratios.append(res.achieved_norm / res.t)
        restarts.append(res.restarts_used)
    counts = np.array(counts)
    print(f"frozen: mean {counts.mean():.2f}, min {counts.min()}, max {counts.max()} of n={args.n}")
    print(f"achieved/t: mean {np.mean(ratios):.3f}, max {np.max(ratios):.4f}")
    print(f"restarts: mean {np.mean(restarts):.2f}, max {np.max(restarts)}")


if __name__ == "__main__":
    main()
