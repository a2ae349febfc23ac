"""Command line surface.

Subcommands:

  plan     solve one problem from a JSON config, write the path as JSON
  bench    run a benchmark suite from a JSON config, write CSV (+ SVG)
  meta     primitive-method runtime comparison over the shipped environments
  scaling  hypercube runtime over dimension with a cubic fit

Exit codes: 0 solved / suite completed, 2 infeasible, 3 timed out,
1 usage or config error.  Set FIBERPLAN_LOG=debug|info|warning for logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field, fields

import numpy as np

from . import bench, svgplot
from .bench import BenchSuite, Experiment
from .environments import ENVIRONMENTS
from .planners import (BASELINE_ALIASES, INFEASIBLE, SOLVED, TIMEDOUT,
                       BundlePlanner, PlannerConfig)
from .samplers import SamplerConfig

log = logging.getLogger("fiberplan")

ENV_PARAM_KEYS = {
    "hypercube": {"n", "eps"},
    "disk_crossing": {"m"},
    "wall_gap": {"gap_width"},
}

PLANNER_NAMES = sorted(set(BASELINE_ALIASES) |
                       {"qrrt", "qrrtstar", "qmp", "qmpstar"})

# flat config keys accepted for planner behavior
_PLANNER_KEYS = {f.name for f in fields(PlannerConfig)} - {"algorithm", "seed",
                                                           "time_limit",
                                                           "sampler"}
_SAMPLER_KEYS = {f.name for f in fields(SamplerConfig)}


class ConfigError(ValueError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass
class ProblemConfig:
    environment: str
    env_params: dict = field(default_factory=dict)
    planner: str = "qrrt"
    planner_params: dict = field(default_factory=dict)
    seed: int = 0
    time_limit: float = 60.0
    out: str | None = None

    def build_problem(self):
        return ENVIRONMENTS[self.environment](**self.env_params)

    def build_config(self):
        params = dict(self.planner_params, algorithm=self.planner)
        return bench.build_config(params, self.seed, self.time_limit)


def _take(doc, key, default=None):
    return doc.pop(key) if key in doc else default


def _check_planner_params(params, prefix=""):
    for key, value in params.items():
        if key not in _PLANNER_KEYS and key not in _SAMPLER_KEYS:
            raise ConfigError(prefix + key, "unknown key")
    try:
        bench.build_config(dict(params), 0, 1.0)
    except (ValueError, TypeError) as e:
        raise ConfigError(prefix.rstrip("."), str(e)) from e


def _parse_problem(doc, path=""):
    env = _take(doc, "environment")
    if env is None:
        raise ConfigError(path + "environment", "missing key")
    if env not in ENVIRONMENTS:
        raise ConfigError(path + "environment",
                          f"unknown environment {env!r}")
    env_params = {}
    for key in list(doc):
        if key in ENV_PARAM_KEYS[env]:
            env_params[key] = doc.pop(key)
    planner = _take(doc, "planner", "qrrt")
    if planner not in PLANNER_NAMES:
        raise ConfigError(path + "planner", f"unknown planner {planner!r}")
    seed = _take(doc, "seed", 0)
    time_limit = _take(doc, "time_limit", 60.0)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError(path + "seed", "must be a nonnegative integer")
    if time_limit <= 0:
        raise ConfigError(path + "time_limit", "must be positive")
    out = _take(doc, "out")
    planner_params = dict(doc)
    _check_planner_params(planner_params, path)
    try:
        ENVIRONMENTS[env](**env_params)
    except (ValueError, TypeError) as e:
        raise ConfigError(path + env, str(e)) from e
    return ProblemConfig(env, env_params, planner, planner_params,
                         seed, time_limit, out)


def _parse_suite(doc):
    experiments = []
    exp_docs = _take(doc, "experiments")
    if not isinstance(exp_docs, list) or not exp_docs:
        raise ConfigError("experiments", "must be a nonempty list")
    base_seed = _take(doc, "base_seed", 0)
    out_csv = _take(doc, "out_csv")
    out_svg = _take(doc, "out_svg")
    parallel = _take(doc, "parallel", 1)
    if doc:
        raise ConfigError(sorted(doc)[0], "unknown key")
    for i, ed in enumerate(exp_docs):
        path = f"experiments[{i}]."
        if not isinstance(ed, dict):
            raise ConfigError(path.rstrip("."), "must be an object")
        ed = dict(ed)
        env = _take(ed, "environment")
        if env not in ENVIRONMENTS:
            raise ConfigError(path + "environment",
                              f"unknown environment {env!r}")
        env_params = {}
        for key in list(ed):
            if key in ENV_PARAM_KEYS[env]:
                env_params[key] = ed.pop(key)
        planners = _take(ed, "planners", [{"algorithm": "qrrt"}])
        runs = _take(ed, "runs", 10)
        time_limit = _take(ed, "time_limit", 60.0)
        if ed:
            raise ConfigError(path + sorted(ed)[0], "unknown key")
        for j, pp in enumerate(planners):
            pp = dict(pp)
            algo = pp.pop("algorithm", "qrrt")
            if algo not in PLANNER_NAMES:
                raise ConfigError(f"{path}planners[{j}].algorithm",
                                  f"unknown planner {algo!r}")
            _check_planner_params(pp, f"{path}planners[{j}].")
        try:
            experiments.append(Experiment(env, env_params, planners,
                                          runs=runs, time_limit=time_limit))
        except ValueError as e:
            raise ConfigError(path.rstrip("."), str(e)) from e
    return BenchSuite(experiments, base_seed=base_seed, out_csv=out_csv,
                      out_svg=out_svg, parallel=parallel)


def parse_config(text):
    """Strict JSON config parser; returns a ProblemConfig or a BenchSuite."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("", f"malformed JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigError("", "top level must be a JSON object")
    if "experiments" in doc:
        return _parse_suite(dict(doc))
    return _parse_problem(dict(doc))


def emit_config(config):
    """Inverse of parse_config for problem configs (canonical flat form)."""
    doc = {"environment": config.environment, **config.env_params,
           "planner": config.planner, "seed": config.seed,
           "time_limit": config.time_limit, **config.planner_params}
    if config.out is not None:
        doc["out"] = config.out
    return json.dumps(doc, sort_keys=True, indent=2)


# -- commands ----------------------------------------------------------------

def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as e:
        raise ConfigError(path, str(e)) from e


def _solution_document(config, outcome):
    doc = {
        "environment": config.environment,
        "env_params": config.env_params,
        "planner": config.planner,
        "seed": config.seed,
        "status": outcome.status,
        "cost": None if not np.isfinite(outcome.cost) else outcome.cost,
        "vertices_per_level": outcome.vertices_per_level,
        "iterations": outcome.iterations,
    }
    if outcome.confidence is not None:
        doc["confidence"] = outcome.confidence
    if outcome.path is not None:
        doc["waypoints"] = [[float(v) for v in w]
                            for w in outcome.path.waypoints]
    # wall time deliberately omitted so equal runs emit equal bytes
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def cmd_plan(args):
    config = _load_config(args.config)
    if not isinstance(config, ProblemConfig):
        raise ConfigError(args.config, "plan expects a problem config")
    if args.planner:
        if args.planner not in PLANNER_NAMES:
            raise ConfigError("planner", f"unknown planner {args.planner!r}")
        config.planner = args.planner
    if args.seed is not None:
        config.seed = args.seed
    if args.time_limit is not None:
        config.time_limit = args.time_limit
    out_path = args.out or config.out or "solution.json"

    problem = config.build_problem()
    outcome = BundlePlanner(problem, config.build_config()).run()

    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(_solution_document(config, outcome))
    if outcome.status == SOLVED:
        print(f"solved cost={outcome.cost:.6f} "
              f"time={outcome.wall_time:.3f}s -> {out_path}")
        return 0
    if outcome.status == INFEASIBLE:
        print(f"infeasible (confidence {outcome.confidence:.3f}) "
              f"time={outcome.wall_time:.3f}s")
        return 2
    print(f"timeout after {outcome.wall_time:.1f}s")
    return 3


def _write_outputs(records, out_csv, plot, out_svg):
    if out_csv:
        with open(out_csv, "w", encoding="utf-8") as fh:
            fh.write(bench.records_to_csv(records))
        print(f"wrote {out_csv}")
    print(bench.summary_text(records))
    if plot and out_svg:
        groups = {}
        for r in records:
            groups.setdefault(f"{r.planner}\n{r.environment}", []).append(r.time_s)
        svgplot.write_svg(svgplot.box_plot(groups, title="runtime",
                                           ylabel="time [s]"), out_svg)
        print(f"wrote {out_svg}")


def cmd_bench(args):
    suite = _load_config(args.config)
    if not isinstance(suite, BenchSuite):
        raise ConfigError(args.config, "bench expects a suite config")
    if args.runs is not None:
        for exp in suite.experiments:
            exp.runs = args.runs
    if args.time_limit is not None:
        for exp in suite.experiments:
            exp.time_limit = args.time_limit
    if args.parallel is not None:
        suite.parallel = args.parallel
    out_csv = args.out or suite.out_csv or "bench.csv"
    records = bench.run_suite(suite)
    _write_outputs(records, out_csv, args.plot,
                   suite.out_svg or out_csv.rsplit(".", 1)[0] + ".svg")
    return 0


def cmd_meta(args):
    rows = bench.meta_analysis(runs=args.runs or 10,
                               time_limit=args.time_limit or 60.0,
                               parallel=args.parallel or 1)
    out = args.out or "meta.csv"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("algorithm,axis,variant,mean_s,ratio,flagged\n")
        for algo, axis, variant, mean, ratio, flagged in rows:
            fh.write(f"{algo},{axis},{variant},{mean:.6f},{ratio:.4f},"
                     f"{int(flagged)}\n")
    print(f"wrote {out}")
    for algo, axis, variant, mean, ratio, flagged in rows:
        flag = " *" if flagged else ""
        print(f"{algo:9s} {axis:15s} {variant:25s} "
              f"{mean:8.3f}s  x{ratio:.2f}{flag}")
    return 0


def cmd_scaling(args):
    n_list = [int(v) for v in args.dims.split(",")]
    result = bench.scaling_study({"algorithm": args.planner or "qrrt"},
                                 n_list, runs=args.runs or 10,
                                 time_limit=args.time_limit or 60.0,
                                 fit_log=args.log_fit,
                                 parallel=args.parallel or 1)
    out = args.out or "scaling.csv"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("n,mean_s\n")
        for n, mean in result["rows"]:
            fh.write(f"{n},{mean:.6f}\n")
    print(f"wrote {out}")
    for n, mean in result["rows"]:
        print(f"n={n:4d}  mean {mean:.3f}s")
    if result["coeffs"] is not None:
        space = "log-time" if result["fit_log"] else "time"
        print(f"cubic fit ({space}): coeffs={result['coeffs']} "
              f"residual={result['residual']:.3e}")
    if args.plot:
        svg = svgplot.line_plot(
            {args.planner or "qrrt": result["rows"]},
            title="runtime vs. dimension", xlabel="dimension n",
            ylabel="mean time [s]", logy=True)
        path = out.rsplit(".", 1)[0] + ".svg"
        svgplot.write_svg(svg, path)
        print(f"wrote {path}")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fiberplan",
        description="Multilevel sampling-based motion planning")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="solve one problem")
    p.add_argument("--config", required=True)
    p.add_argument("--planner", choices=PLANNER_NAMES)
    p.add_argument("--seed", type=int)
    p.add_argument("--time-limit", type=float, dest="time_limit")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plan)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("--config", required=True)
    b.add_argument("--runs", type=int)
    b.add_argument("--time-limit", type=float, dest="time_limit")
    b.add_argument("--out")
    b.add_argument("--plot", action="store_true")
    b.add_argument("--parallel", type=int)
    b.set_defaults(func=cmd_bench)

    m = sub.add_parser("meta", help="primitive-method comparison")
    m.add_argument("--runs", type=int)
    m.add_argument("--time-limit", type=float, dest="time_limit")
    m.add_argument("--out")
    m.add_argument("--plot", action="store_true")
    m.add_argument("--parallel", type=int)
    m.set_defaults(func=cmd_meta)

    s = sub.add_parser("scaling", help="hypercube scaling study")
    s.add_argument("--planner", choices=PLANNER_NAMES)
    s.add_argument("--dims", default="3,4,5,6,7")
    s.add_argument("--runs", type=int)
    s.add_argument("--time-limit", type=float, dest="time_limit")
    s.add_argument("--out")
    s.add_argument("--plot", action="store_true")
    s.add_argument("--log-fit", action="store_true", dest="log_fit")
    s.add_argument("--parallel", type=int)
    s.set_defaults(func=cmd_scaling)
    return parser


def main(argv=None):
    level = os.environ.get("FIBERPLAN_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
