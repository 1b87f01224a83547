"""Exact minimum discrepancy of the lower-bound family by brute force."""

import argparse
import math

from specbal.baselines import BRUTE_FORCE_CAP, brute_force_min
from specbal.instance import generate_lower_bound


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 12, 16, 20])
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)
    print("n,min_discrepancy,ratio_sqrt_n,signs")
    for n in args.sizes:
        if n > BRUTE_FORCE_CAP:
            print(f"{n},skipped,,")
            continue
        x, v = brute_force_min(generate_lower_bound(n), args.threads)
        print(f"{n},{v!r},{v / math.sqrt(n):.6f},{''.join('+' if s > 0 else '-' for s in x)}")


if __name__ == "__main__":
    main()
