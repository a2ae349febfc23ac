#!/usr/bin/env python3
"""Runtime-over-dimension study on the hypercube corridor environment.

Runs one planner across a list of dimensions, fits a cubic to the mean
runtimes, and optionally extrapolates the fit to a larger dimension.
Writes a CSV of means and a log-scale line plot.
"""

import argparse

from fiberplan.bench import cubic_extrapolate, scaling_study
from fiberplan.svgplot import line_plot, write_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--planner", default="rrt")
    ap.add_argument("--dims", default="3,4,5,6",
                    help="comma-separated ascending dimensions")
    ap.add_argument("--runs", type=int, default=3)
    ap.add_argument("--time-limit", type=float, default=60.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--extrapolate-to", type=int, default=None,
                    help="evaluate the cubic fit at this dimension")
    ap.add_argument("--log-fit", action="store_true",
                    help="fit the cubic to log runtimes")
    ap.add_argument("--out", default="scaling.csv")
    ap.add_argument("--svg", default="scaling.svg")
    args = ap.parse_args()

    dims = [int(d) for d in args.dims.split(",") if d]
    res = scaling_study({"algorithm": args.planner}, dims, runs=args.runs,
                        time_limit=args.time_limit, base_seed=args.seed,
                        fit_log=args.log_fit)

    with open(args.out, "w") as fh:
        fh.write("n,mean_s\n")
        for n, mean in res["rows"]:
            fh.write(f"{n},{mean}\n")
    write_svg(line_plot({args.planner: [(n, m) for n, m in res["rows"]]},
                        title=f"{args.planner} runtime vs dimension",
                        xlabel="dimension n", ylabel="mean seconds",
                        logy=True), args.svg)

    for n, mean in res["rows"]:
        print(f"n={n:4d}  mean {mean:.3f}s")
    if res["coeffs"] is not None:
        print(f"cubic fit coeffs {res['coeffs']} (rms residual "
              f"{res['residual']:.2e})")
        if args.extrapolate_to is not None:
            v = cubic_extrapolate(res["coeffs"], args.extrapolate_to,
                                  fit_log=res["fit_log"])
            print(f"extrapolated mean at n={args.extrapolate_to}: {v:.1f}s")
    print(f"wrote {args.out} and {args.svg}")


if __name__ == "__main__":
    main()
