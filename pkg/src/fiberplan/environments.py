"""Analytic planning problems.

Three shipped families:

  hypercube      n-dof unit cube with corridors along the edges; the level
                 sequence drops one trailing coordinate at a time down to 2D
  disk_crossing  m disk robots trading places across a crossroad of four
                 rectangular blocks; one projection removes half the robots
  wall_gap       one disk robot and a vertical wall with a single gap;
                 two levels, the base (x-axis) ignores the wall

All constraint functions are pure and vectorized over state batches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bundles import Bundle, Drop, Keep, Prefix, check_admissible
from .spaces import RealVector, StateSpace

CONSTRUCTION_ADMISSIBILITY_SAMPLES = 1000


@dataclass(frozen=True)
class GoalRegion:
    center: np.ndarray
    radius: float = 0.0

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("goal radius must be nonnegative")


class PlanningProblem:
    """Bundle spaces X_1..X_K, per-level constraints, start, and goal region."""

    def __init__(self, name, spaces, bundles, constraints, start, goal,
                 env_params=None, optimal_cost=None):
        if len(constraints) != len(spaces):
            raise ValueError("one constraint per level required")
        if len(bundles) != len(spaces) - 1:
            raise ValueError("K levels need K-1 projections")
        for i, b in enumerate(bundles):
            if b.base != spaces[i] or b.total != spaces[i + 1]:
                raise ValueError(f"bundle {i} does not chain the level spaces")
        self.name = name
        self.spaces = list(spaces)
        self.bundles = list(bundles)
        self.constraints = list(constraints)
        self.start = np.asarray(start, dtype=float)
        self.goal = goal
        self.env_params = dict(env_params or {})
        self.optimal_cost = optimal_cost

        top = self.spaces[-1]
        if self.start.shape != (top.dim,):
            raise ValueError("start state does not match the top-level space")
        if not self.constraints[-1].valid(self.start):
            raise ValueError("start state is infeasible")
        if not self.constraints[-1].valid(self.goal.center):
            raise ValueError("goal center is infeasible")
        rng = np.random.default_rng(12345)
        for i, b in enumerate(self.bundles):
            bad = check_admissible(b, self.constraints[i + 1], self.constraints[i],
                                   CONSTRUCTION_ADMISSIBILITY_SAMPLES, rng)
            if bad:
                raise ValueError(f"projection {i} is inadmissible "
                                 f"({bad} violations in Monte-Carlo check)")

    @property
    def K(self):
        return len(self.spaces)

    def flatten(self):
        """Single-level version of this problem (baseline planners)."""
        return PlanningProblem(self.name + "-flat", [self.spaces[-1]], [],
                               [self.constraints[-1]], self.start, self.goal,
                               env_params=self.env_params,
                               optimal_cost=self.optimal_cost)


# -- constraints -------------------------------------------------------------

class FreeSpace:
    """Everything inside the bounds is valid."""

    def valid(self, x):
        return True

    def valid_many(self, X):
        return np.ones(len(X), dtype=bool)


class HypercubeCorridors:
    """Valid iff at most one coordinate sits away from the cube faces."""

    def __init__(self, eps=0.1):
        self.eps = eps

    def valid_many(self, X):
        X = np.asarray(X, dtype=float)
        mid = np.minimum(X, 1.0 - X) > self.eps
        return mid.sum(axis=1) <= 1

    def valid(self, x):
        return bool(self.valid_many(np.asarray(x, dtype=float)[None, :])[0])


def hypercube_valid(x, eps):
    """Corridor rule on [0,1]^n, exposed standalone for direct checks."""
    return HypercubeCorridors(eps).valid(x)


class WallGap:
    """Disk robot vs. a vertical wall at x=5 with a centered gap."""

    def __init__(self, gap_width, robot_radius=0.5, wall_x=5.0, world=10.0):
        if gap_width < 0:
            raise ValueError("gap width must be nonnegative")
        self.gap = float(gap_width)
        self.r = robot_radius
        self.wall_x = wall_x
        half = gap_width / 2.0
        mid = world / 2.0
        self.segments = []
        lo_top = mid - half
        hi_bot = mid + half
        if lo_top > 0:
            self.segments.append((0.0, lo_top))
        if hi_bot < world:
            self.segments.append((hi_bot, world))

    def valid_many(self, X):
        X = np.asarray(X, dtype=float)
        ok = np.ones(len(X), dtype=bool)
        dx = X[:, 0] - self.wall_x
        for a, b in self.segments:
            cy = np.clip(X[:, 1], a, b)
            d2 = dx * dx + (X[:, 1] - cy) ** 2
            ok &= d2 >= self.r * self.r
        return ok

    def valid(self, x):
        return bool(self.valid_many(np.asarray(x, dtype=float)[None, :])[0])


CROSSING_BLOCKS = (((-5.0, -1.0), (-5.0, -1.0)),
                   ((1.0, 5.0), (-5.0, -1.0)),
                   ((-5.0, -1.0), (1.0, 5.0)),
                   ((1.0, 5.0), (1.0, 5.0)))


class DiskCrossing:
    """m disk robots among four corner blocks: pairwise separation >= 2r and
    center-to-block clearance >= r."""

    def __init__(self, m, robot_radius=0.4, blocks=CROSSING_BLOCKS):
        self.m = m
        self.r = robot_radius
        self.blocks = blocks

    def valid_many(self, X):
        X = np.asarray(X, dtype=float)
        P = X.reshape(len(X), self.m, 2)
        ok = np.ones(len(X), dtype=bool)
        r2 = self.r * self.r
        for (x0, x1), (y0, y1) in self.blocks:
            cx = np.clip(P[:, :, 0], x0, x1)
            cy = np.clip(P[:, :, 1], y0, y1)
            d2 = (P[:, :, 0] - cx) ** 2 + (P[:, :, 1] - cy) ** 2
            ok &= np.all(d2 >= r2, axis=1)
        sep2 = (2.0 * self.r) ** 2
        for i in range(self.m):
            for j in range(i + 1, self.m):
                d2 = np.sum((P[:, i] - P[:, j]) ** 2, axis=1)
                ok &= d2 >= sep2
        return ok

    def valid(self, x):
        return bool(self.valid_many(np.asarray(x, dtype=float)[None, :])[0])


# -- shipped problems --------------------------------------------------------

def hypercube_problem(n, eps=0.1):
    """Corridor cube [0,1]^n planned through the full coordinate-dropping
    sequence down to [0,1]^2; start at the all-zeros corner, goal all-ones."""
    if n < 2:
        raise ValueError("hypercube needs n >= 2")
    spaces = [StateSpace([RealVector((0.0,) * m, (1.0,) * m)])
              for m in range(2, n + 1)]
    bundles = [Bundle.from_tags(spaces[i + 1], [Prefix(i + 2)])
               for i in range(len(spaces) - 1)]
    constraints = [HypercubeCorridors(eps) for _ in spaces]
    start = np.zeros(n)
    goal = GoalRegion(np.ones(n), 0.0)
    return PlanningProblem("hypercube", spaces, bundles, constraints, start, goal,
                           env_params={"n": n, "eps": eps},
                           optimal_cost=None)


# eight lane slots for the crossing arms; goals are the antipodes
_CROSSING_SLOTS_4 = [(-4.0, 0.0), (4.0, 0.0), (0.0, -4.0), (0.0, 4.0)]
_CROSSING_SLOTS_8 = [(-4.0, -0.5), (4.0, 0.5), (0.5, -4.0), (-0.5, 4.0),
                     (-4.0, 0.5), (4.0, -0.5), (-0.5, -4.0), (0.5, 4.0)]


def disk_crossing_problem(m):
    """m disk robots crossing to antipodal arm positions; one projection
    removes the last ceil(m/2) robots."""
    if not 2 <= m <= 8:
        raise ValueError("disk crossing supports 2..8 robots")
    slots = _CROSSING_SLOTS_4 if m <= 4 else _CROSSING_SLOTS_8
    kept = m - math.ceil(m / 2)
    total = StateSpace([RealVector((-5.0, -5.0), (5.0, 5.0)) for _ in range(m)])
    base_space = StateSpace([RealVector((-5.0, -5.0), (5.0, 5.0))
                             for _ in range(kept)])
    tags = [Keep()] * kept + [Drop()] * (m - kept)
    bundle = Bundle.from_tags(total, tags)
    assert bundle.base == base_space
    start = np.array(slots[:m], dtype=float).reshape(-1)
    goal_center = -start
    constraints = [DiskCrossing(kept), DiskCrossing(m)]
    return PlanningProblem("disk_crossing", [base_space, total], [bundle],
                           constraints, start, GoalRegion(goal_center, 0.3),
                           env_params={"robots": m})


WALL_GAP_ROBOT_RADIUS = 0.5


def wall_gap_optimal_cost(gap_width):
    """Closed-form optimum: the straight line through the gap center clears
    the wall exactly when the gap admits the robot."""
    if gap_width >= 2.0 * WALL_GAP_ROBOT_RADIUS:
        return 6.0
    return np.inf


def wall_gap_problem(gap_width):
    """One disk robot crossing a gapped vertical wall; the 1D base drops y
    and ignores the wall entirely."""
    if gap_width < 0:
        raise ValueError("gap width must be nonnegative")
    total = StateSpace([RealVector((0.0, 0.0), (10.0, 10.0))])
    base_space = StateSpace([RealVector((0.0,), (10.0,))])
    bundle = Bundle.from_tags(total, [Prefix(1)])
    assert bundle.base == base_space
    start = np.array([2.0, 5.0])
    goal = GoalRegion(np.array([8.0, 5.0]), 0.0)
    constraints = [FreeSpace(), WallGap(gap_width)]
    cost = wall_gap_optimal_cost(gap_width)
    return PlanningProblem("wall_gap", [base_space, total], [bundle],
                           constraints, start, goal,
                           env_params={"gap_width": gap_width},
                           optimal_cost=None if not np.isfinite(cost) else cost)


ENVIRONMENTS = {
    "hypercube": hypercube_problem,
    "disk_crossing": disk_crossing_problem,
    "wall_gap": wall_gap_problem,
}
