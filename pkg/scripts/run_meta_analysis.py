#!/usr/bin/env python3
"""Compare the primitive-method variants (metric, importance, graph
sampling, section recovery) across the standard environment set.

For each algorithm and axis the mean runtime of every variant is reported
as a ratio to the best variant on that axis (best = 1.0). Cells containing
failed runs enter at the time limit and are flagged.
"""

import argparse
import csv
import sys

from fiberplan.bench import META_AXES, meta_analysis


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--algorithms", default="qrrt,qrrtstar,qmp,qmpstar")
    ap.add_argument("--axes", default=",".join(META_AXES),
                    help="comma-separated subset of: " + ", ".join(META_AXES))
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--time-limit", type=float, default=60.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="meta.csv")
    args = ap.parse_args()

    axes = {}
    for name in args.axes.split(","):
        if name not in META_AXES:
            sys.exit(f"unknown axis {name!r}")
        axes[name] = META_AXES[name]
    rows = meta_analysis(
        algorithms=tuple(a for a in args.algorithms.split(",") if a),
        axes=axes, runs=args.runs, time_limit=args.time_limit,
        base_seed=args.seed)

    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["algorithm", "axis", "variant", "mean_s", "ratio",
                    "flagged"])
        w.writerows(rows)
    for algorithm, axis, variant, mean, ratio, flagged in rows:
        mark = " *" if flagged else ""
        print(f"{algorithm:9s} {axis:14s} {variant:28s} "
              f"{mean:8.3f}s  x{ratio:.2f}{mark}")
    print(f"wrote {args.out} (* = cell contains failed runs)")


if __name__ == "__main__":
    main()
