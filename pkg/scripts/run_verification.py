#!/usr/bin/env python3
"""Full verification sweep: inequality campaigns for every hypothesis family,
measure chains, and the lift pipeline.  Prints one summary line per family and
exits nonzero on any violation.

Usage: python scripts/run_verification.py [--trials 200] [--seed 7] [--workers 2]
"""

import argparse
import math
import sys
import time

import numpy as np

from paleylab.lab import Instance, run_campaign
from paleylab.measures import (
    check_measure_bound,
    check_measure_bound_via_lift,
    random_atomic_measure,
    random_density_measure,
)
from paleylab.sets import Enumeration

FAMILIES = {
    "negative-halfline": [
        Instance(k=(2, 5, 11, 23), forbidden="negative-halfline", M=32),
        Instance(k=(1, 3, 7, 15, 31, 63), forbidden="negative-halfline", M=80),
    ],
    "schur": [
        Instance(k=(2, 5, 11, 23), forbidden="schur", M=32),
        Instance(k=(3, 8, 17, 40, 90), forbidden="schur", M=128),
        Instance(k=(1, 3, 7, 15, 31, 63, 127, 255), forbidden="schur", M=300),
    ],
    "outside-K-positive": [
        Instance(k=(2, 5, 11, 23), forbidden="outside-K-positive", M=32),
        Instance(k=(1, 3, 7, 15, 31), forbidden="outside-K-positive", M=40),
    ],
    "s": [
        Instance(k=(2, 5, 11), forbidden="s", M=24),
    ],
    "alternating": [
        Instance(k=(4, 9, 19, 41), forbidden="alternating", M=48),
    ],
}

CEILING_NOTE = {
    "negative-halfline": math.sqrt(2),
    "schur": math.sqrt(2),
    "outside-K-positive": math.sqrt(math.e),
    "s": 2 * math.sqrt(2),
    "alternating": 2.0,
}


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--workers", type=int, default=2)
    ap.add_argument("--measure-trials", type=int, default=40)
    args = ap.parse_args()

    bad = 0
    for name, templates in FAMILIES.items():
        t0 = time.time()
        report = run_campaign(templates, trials=args.trials, master_seed=args.seed,
                              workers=args.workers)
        status = "PASS" if report.ok else "FAIL"
        bad += not report.ok
        print(
            f"{status} {name:22s} instances={report.instances:5d} "
            f"max_ratio={report.max_ratio:.6f} (<= {CEILING_NOTE[name]:.4f}) "
            f"worst_residual={report.worst_residual:.2e} {time.time() - t0:.1f}s"
        )

    t0 = time.time()
    worst = 0.0
    fails = 0
    rng = np.random.default_rng(args.seed)
    for i in range(args.measure_trials):
        ks = [int(rng.integers(1, 5))]
        while len(ks) < 5 and 2 * ks[-1] + 3 < 60:
            ks.append(2 * ks[-1] + int(rng.integers(1, 4)))
        e = Enumeration(ks)
        hyp = "schur-riesz" if i % 2 == 0 else "schur"
        mu = (
            random_density_measure(e, hyp, M=sum(ks) + 1, seed=i)
            if i % 3
            else random_atomic_measure(e, hyp, M=sum(ks) + 1, seed=i)
        )
        rep = check_measure_bound(mu, e, hypothesis=hyp)
        fails += bool(rep.check())
        worst = max(worst, rep.ratio)
    status = "PASS" if fails == 0 else "FAIL"
    bad += fails
    print(
        f"{status} {'measure-chain':22s} instances={args.measure_trials:5d} "
        f"max_ratio={worst:.6f} (<= {2 * math.sqrt(2):.4f}) {time.time() - t0:.1f}s"
    )

    t0 = time.time()
    fails = 0
    worst = 0.0
    for i in range(8):
        J = int(rng.integers(1, 6))
        gammas = [int(g) for g in rng.choice(np.arange(-40, 41), size=J, replace=False)]
        e = Enumeration(gammas)
        mu = random_density_measure(e, "s", M=48, seed=100 + i)
        rep = check_measure_bound_via_lift(mu, e)
        fails += bool(rep.check())
        worst = max(worst, rep.ratio)
    status = "PASS" if fails == 0 else "FAIL"
    bad += fails
    print(
        f"{status} {'lift-pipeline':22s} instances={8:5d} "
        f"max_ratio={worst:.6f} (<= {2 * math.sqrt(2):.4f}) {time.time() - t0:.1f}s"
    )
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
