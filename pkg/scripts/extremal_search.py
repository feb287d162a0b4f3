#!/usr/bin/env python3
"""Extremal-ratio search: gradient ascent over admissible spectra for growing
lacunary families, reporting the best observed ratio per configuration.

The observed maxima are data, not certified extremes; they must stay below
sqrt(2) for the half-line and Schur hypotheses.

Usage: python scripts/extremal_search.py [--out ratios.csv] [--iterations 400]
"""

import argparse
import math
import sys

from paleylab.lab import Instance
from paleylab.optimize import OptimizerConfig, optimize_ratio

CONFIGS = [
    ((4,), "negative-halfline", 8),
    ((2, 5), "negative-halfline", 12),
    ((2, 5, 11), "negative-halfline", 16),
    ((2, 5, 11, 23), "negative-halfline", 32),
    ((2, 5, 11, 23, 47), "negative-halfline", 64),
    ((2, 5), "schur", 12),
    ((2, 5, 11), "schur", 16),
    ((2, 5, 11, 23), "schur", 32),
    ((2, 5, 11, 23, 47), "schur", 64),
]


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out")
    ap.add_argument("--iterations", type=int, default=400)
    ap.add_argument("--restarts", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rows = ["k,forbidden,ratio,sqrt2_margin"]
    ceiling = math.sqrt(2)
    bad = 0
    for k, forbidden, M in CONFIGS:
        inst = Instance(k=k, forbidden=forbidden, M=M)
        cfg = OptimizerConfig(
            restarts=args.restarts, iterations=args.iterations, seed=args.seed
        )
        res = optimize_ratio(inst, cfg)
        margin = ceiling - res.ratio
        bad += margin < -1e-6
        print(f"K={k!s:24s} {forbidden:20s} best ratio {res.ratio:.6f} margin {margin:+.6f}")
        rows.append(f"\"{','.join(map(str, k))}\",{forbidden},{res.ratio:.9f},{margin:.9f}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(rows) + "\n")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
