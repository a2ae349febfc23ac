"""Restriction sampling support: base-graph strategies and decay schedules.

The planner samples a level by drawing a base state on (or near) the base
graph and lifting it with a uniform fiber element. Strategies:

  rv   uniform graph vertex
  re   uniform graph edge, then a uniform geodesic point on it
  rdv  vertex drawn with probability proportional to 1/(degree+1)
  nbh  rv draw, then a uniform ball around it whose radius grows over time

An optional path bias redirects draws onto the simplified best base path,
with probability either fixed or decaying exponentially toward it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

STRATEGIES = ("rv", "re", "rdv", "nbh")
PATH_BIAS_MODES = ("off", "fixed", "decay")


@dataclass(frozen=True)
class DecaySchedule:
    """Exponential interpolation from k0 at t=0 toward k1 as t grows."""

    k0: float
    k1: float
    lam: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("decay rate must be nonnegative")


def decay(sched, t):
    if t < 0:
        raise ValueError("decay time must be nonnegative")
    return (sched.k0 - sched.k1) * np.exp(-sched.lam * t) + sched.k1


@dataclass
class SamplerConfig:
    strategy: str = "re"
    path_bias: str = "decay"
    beta_fixed: float = 0.1
    decay_lambda: float = 1e-3
    nbh_epsilon: float = 0.1
    nbh_lambda: float = 1e-3

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown sampling strategy {self.strategy!r}")
        if self.path_bias not in PATH_BIAS_MODES:
            raise ValueError(f"unknown path bias mode {self.path_bias!r}")
        if not 0.0 <= self.beta_fixed <= 1.0:
            raise ValueError("beta_fixed must lie in [0,1]")
        if self.decay_lambda < 0 or self.nbh_lambda < 0 or self.nbh_epsilon < 0:
            raise ValueError("decay rates and nbh radius fraction must be >= 0")

    def path_bias_probability(self, t):
        if self.path_bias == "off":
            return 0.0
        if self.path_bias == "fixed":
            return self.beta_fixed
        return decay(DecaySchedule(1.0, self.beta_fixed, self.decay_lambda), t)


def sample_graph(strategy, graph, rng):
    """Draw a base state on the graph per the given strategy (nbh draws rv)."""
    if graph.n == 0:
        raise ValueError("cannot sample an empty graph")
    if strategy == "re" and graph.n_edges > 0:
        i, j = graph.random_edge(rng)
        t = rng.uniform()
        return graph.space.interpolate(graph.state(i), graph.state(j), t)
    if strategy == "rdv":
        w = 1.0 / (graph.degrees() + 1.0)
        idx = rng.choice(graph.n, p=w / w.sum())
        return graph.state(int(idx)).copy()
    # rv, nbh, and the no-edges re fallback
    return graph.state(int(rng.integers(graph.n))).copy()


def sample_path_restriction(best_path, rng):
    """Uniform arc-length point on the (simplified) best base path."""
    return best_path.point_at(rng.uniform())


def sample_in_ball(space, center, radius, rng):
    """Approximately uniform draw in a metric ball, clamped to bounds."""
    if radius <= 0.0:
        return center.copy()
    direction = rng.standard_normal(space.dim)
    norm = np.linalg.norm(direction)
    if norm == 0.0:
        return center.copy()
    r = radius * rng.uniform() ** (1.0 / space.dim)
    x = center + direction / norm * r
    x = np.minimum(np.maximum(x, space.lower), space.upper)
    return space.normalize(x)


def sample_base(graph, best_path, config, t, rng):
    """One base-space draw: path restriction with the scheduled probability,
    otherwise an on-graph draw; nbh then blurs into a growing ball."""
    x = None
    if best_path is not None and config.path_bias != "off":
        if rng.uniform() < config.path_bias_probability(t):
            x = sample_path_restriction(best_path, rng)
    if x is None:
        x = sample_graph(config.strategy, graph, rng)
    if config.strategy == "nbh":
        radius = decay(DecaySchedule(0.0,
                                     config.nbh_epsilon * graph.space.max_extent(),
                                     config.nbh_lambda), t)
        x = sample_in_ball(graph.space, x, radius, rng)
    return x
