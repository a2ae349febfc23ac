"""Benchmark harness: seeded suites, CSV records, the hypercube scaling
study, and the primitive-method meta-analysis."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .environments import ENVIRONMENTS
from .planners import SOLVED, TIMEDOUT, BundlePlanner, PlannerConfig
from .samplers import SamplerConfig

CSV_HEADER = ["planner", "environment", "params_hash", "run", "seed",
              "time_s", "status", "cost", "vertices_per_level"]

SAMPLER_KEYS = ("strategy", "path_bias", "beta_fixed", "decay_lambda",
                "nbh_epsilon", "nbh_lambda")


@dataclass
class Experiment:
    environment: str
    env_params: dict
    planners: list          # list of planner parameter dicts
    runs: int = 10
    time_limit: float = 60.0

    def __post_init__(self):
        if self.environment not in ENVIRONMENTS:
            raise ValueError(f"unknown environment {self.environment!r}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.time_limit <= 0:
            raise ValueError("time limit must be positive")


@dataclass
class BenchSuite:
    experiments: list
    base_seed: int = 0
    out_csv: str | None = None
    out_svg: str | None = None
    parallel: int = 1


@dataclass
class RunRecord:
    planner: str
    environment: str
    params_hash: str
    run: int
    seed: int
    time_s: float
    status: str
    cost: float
    vertices_per_level: list = field(default_factory=list)


def build_problem(environment, env_params):
    return ENVIRONMENTS[environment](**env_params)


def build_config(planner_params, seed, time_limit):
    """PlannerConfig from a flat parameter dict (sampler keys split out)."""
    params = dict(planner_params)
    sampler_kwargs = {k: params.pop(k) for k in SAMPLER_KEYS if k in params}
    params.setdefault("algorithm", "qrrt")
    params["seed"] = seed
    params["time_limit"] = time_limit
    if sampler_kwargs:
        params["sampler"] = SamplerConfig(**sampler_kwargs)
    return PlannerConfig(**params)


def params_hash(environment, env_params, planner_params):
    blob = json.dumps([environment, env_params, planner_params], sort_keys=True)
    return hashlib.sha1(blob.encode()).hexdigest()[:10]


def _env_label(environment, env_params):
    if env_params:
        inner = ",".join(f"{k}={env_params[k]}" for k in sorted(env_params))
        return f"{environment}({inner})"
    return environment


def run_cell(environment, env_params, planner_params, seed, time_limit, run):
    """One planner execution, exceptions included, as a RunRecord."""
    label = _env_label(environment, env_params)
    name = planner_params.get("algorithm", "qrrt")
    h = params_hash(environment, env_params, planner_params)
    try:
        problem = build_problem(environment, env_params)
        config = build_config(planner_params, seed, time_limit)
        outcome = BundlePlanner(problem, config).run()
    except Exception:
        return RunRecord(name, label, h, run, seed, time_limit, "error",
                         float("inf"), [])
    # failed runs enter the averages at the cut-off
    time_s = time_limit if outcome.status == TIMEDOUT else outcome.wall_time
    return RunRecord(name, label, h, run, seed, time_s, outcome.status,
                     outcome.cost, outcome.vertices_per_level)


def _cells(suite):
    for exp in suite.experiments:
        for planner_params in exp.planners:
            for run in range(exp.runs):
                yield (exp.environment, exp.env_params, planner_params,
                       suite.base_seed + run, exp.time_limit, run)


def run_suite(suite):
    cells = list(_cells(suite))
    if suite.parallel > 1:
        with ProcessPoolExecutor(max_workers=suite.parallel) as pool:
            records = list(pool.map(_run_cell_tuple, cells))
    else:
        records = [run_cell(*c) for c in cells]
    return records


def _run_cell_tuple(args):
    return run_cell(*args)


# -- CSV and aggregation -----------------------------------------------------

def records_to_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.planner, r.environment, r.params_hash, r.run, r.seed,
                    f"{r.time_s:.6f}", r.status,
                    "" if not math.isfinite(r.cost) else f"{r.cost:.9f}",
                    ";".join(str(v) for v in r.vertices_per_level)])
    return buf.getvalue()


def records_from_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if rows[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    out = []
    for row in rows[1:]:
        out.append(RunRecord(
            planner=row[0], environment=row[1], params_hash=row[2],
            run=int(row[3]), seed=int(row[4]), time_s=float(row[5]),
            status=row[6], cost=float(row[7]) if row[7] else float("inf"),
            vertices_per_level=[int(v) for v in row[8].split(";") if v]))
    return out


def aggregate(records):
    """Per (planner, environment, params_hash): time stats and success rate."""
    cells = {}
    for r in records:
        cells.setdefault((r.planner, r.environment, r.params_hash), []).append(r)
    out = {}
    for key, rs in sorted(cells.items()):
        times = np.array([r.time_s for r in rs])
        out[key] = {
            "runs": len(rs),
            "mean": float(times.mean()),
            "median": float(np.median(times)),
            "min": float(times.min()),
            "max": float(times.max()),
            "success": sum(r.status == SOLVED for r in rs) / len(rs),
        }
    return out


def summary_text(records):
    lines = ["planner environment runs mean median min max success"]
    for (planner, env, _), st in aggregate(records).items():
        lines.append(f"{planner} {env} {st['runs']} {st['mean']:.3f} "
                     f"{st['median']:.3f} {st['min']:.3f} {st['max']:.3f} "
                     f"{st['success']:.2f}")
    return "\n".join(lines)


# -- scaling study -----------------------------------------------------------

def scaling_study(planner_params, n_list, runs=10, time_limit=60.0,
                  base_seed=0, fit_log=False, parallel=1):
    """Hypercube runtimes over dimension plus a least-squares cubic fit."""
    if list(n_list) != sorted(n_list):
        raise ValueError("dimension list must ascend")
    suite = BenchSuite(
        experiments=[Experiment("hypercube", {"n": int(n)}, [planner_params],
                                runs=runs, time_limit=time_limit)
                     for n in n_list],
        base_seed=base_seed, parallel=parallel)
    records = run_suite(suite)
    rows = []
    for n in n_list:
        label = _env_label("hypercube", {"n": int(n)})
        times = [r.time_s for r in records if r.environment == label]
        rows.append((int(n), float(np.mean(times))))
    xs = np.array([r[0] for r in rows], dtype=float)
    ys = np.array([r[1] for r in rows], dtype=float)
    if fit_log:
        ys = np.log(np.maximum(ys, 1e-9))
    coeffs = np.polyfit(xs, ys, 3) if len(xs) >= 4 else None
    residual = None
    if coeffs is not None:
        residual = float(np.sqrt(np.mean((np.polyval(coeffs, xs) - ys) ** 2)))
    return {"rows": rows, "fit_log": fit_log,
            "coeffs": None if coeffs is None else [float(c) for c in coeffs],
            "residual": residual, "records": records}


def cubic_extrapolate(coeffs, n, fit_log=False):
    v = float(np.polyval(np.asarray(coeffs), n))
    return math.exp(v) if fit_log else v


# -- meta-analysis -----------------------------------------------------------

META_ENVIRONMENTS = [("hypercube", {"n": 20}),
                     ("disk_crossing", {"m": 4}),
                     ("wall_gap", {"gap_width": 1.2})]

META_AXES = {
    "metric": [{"metric": "intrinsic"}, {"metric": "quotient"}],
    "importance": [{"importance": "uniform"}, {"importance": "exponential"},
                   {"importance": "greedy"}],
    "graph_sampling": [{"strategy": "rv"}, {"strategy": "re"},
                       {"strategy": "rdv"}],
    "find_section": [{"use_find_section": True}, {"use_find_section": False}],
}


def _variant_label(variant):
    return ",".join(f"{k}={v}" for k, v in variant.items())


def meta_analysis(algorithms=("qrrt", "qrrtstar", "qmp", "qmpstar"),
                  axes=None, environments=None, runs=10, time_limit=60.0,
                  base_seed=0, parallel=1):
    """Mean-runtime ratios per primitive-method axis, best variant at 1.0.

    Rows: (algorithm, axis, variant label, mean seconds, ratio, flagged)
    where flagged marks cells containing failed runs (entered at the limit).
    """
    axes = dict(axes) if axes is not None else dict(META_AXES)
    environments = environments if environments is not None else META_ENVIRONMENTS
    rows = []
    for algorithm in algorithms:
        for axis, variants in axes.items():
            means = []
            for variant in variants:
                planner_params = {"algorithm": algorithm, **variant}
                suite = BenchSuite(
                    experiments=[Experiment(env, params, [planner_params],
                                            runs=runs, time_limit=time_limit)
                                 for env, params in environments],
                    base_seed=base_seed, parallel=parallel)
                records = run_suite(suite)
                mean = float(np.mean([r.time_s for r in records]))
                flagged = any(r.status != SOLVED for r in records)
                means.append((variant, mean, flagged))
            best = min(m for _, m, _ in means)
            for variant, mean, flagged in means:
                rows.append((algorithm, axis, _variant_label(variant), mean,
                             mean / best if best > 0 else 1.0, flagged))
    return rows
