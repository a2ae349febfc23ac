#!/usr/bin/env python3
"""Benchmark the multilevel planners against single-level baselines on the
high-dimensional hypercube corridor environment.

Writes a raw per-run CSV, a runtime box plot, and prints a summary table.
"""

import argparse

from fiberplan.bench import (BenchSuite, Experiment, records_to_csv,
                             run_suite, summary_text)
from fiberplan.svgplot import box_plot, write_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=100, help="hypercube dimension")
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--time-limit", type=float, default=60.0)
    ap.add_argument("--planners", default="qrrt,qmp,rrt",
                    help="comma-separated algorithm names")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="hypercube_bench.csv")
    ap.add_argument("--svg", default="hypercube_bench.svg")
    args = ap.parse_args()

    planners = [{"algorithm": p} for p in args.planners.split(",") if p]
    suite = BenchSuite(
        experiments=[Experiment("hypercube", {"n": args.n}, planners,
                                runs=args.runs, time_limit=args.time_limit)],
        base_seed=args.seed)
    records = run_suite(suite)

    with open(args.out, "w") as fh:
        fh.write(records_to_csv(records))
    groups = {}
    for r in records:
        groups.setdefault(r.planner, []).append(r.time_s)
    write_svg(box_plot(groups, title=f"hypercube(n={args.n}) runtimes",
                       ylabel="seconds"), args.svg)
    print(summary_text(records))
    print(f"wrote {args.out} and {args.svg}")


if __name__ == "__main__":
    main()
