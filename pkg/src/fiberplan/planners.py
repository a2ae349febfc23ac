"""Multilevel planners over bundle sequences.

One planner run owns a stack of levels, one per bundle space. Levels are
entered smallest-first; when a level is entered we first try to unproject
the base solution through a recursive path-section search, then grow the
level graphs, always expanding the level with the highest importance.

Grow functions: qrrt / qrrtstar (trees with rewiring), qmp / qmpstar
(roadmaps). The classical single-level planners are the K=1 special case
and are exposed under their usual names.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import heuristics
from .bundles import PathOnSpace, section_l1
from .environments import GoalRegion
from .graph import LevelGraph
from .samplers import SamplerConfig, sample_base

TREE_ALGORITHMS = ("qrrt", "qrrtstar")
ROADMAP_ALGORITHMS = ("qmp", "qmpstar")
ALGORITHMS = TREE_ALGORITHMS + ROADMAP_ALGORITHMS
BASELINE_ALIASES = {"rrt": "qrrt", "rrtstar": "qrrtstar",
                    "prm": "qmp", "prmstar": "qmpstar"}

SOLVED = "solved"
TIMEDOUT = "timeout"
INFEASIBLE = "infeasible"


@dataclass
class PlannerConfig:
    algorithm: str = "qrrt"
    seed: int = 0
    time_limit: float = 60.0
    level_budget: int | None = None      # per-level grow-call cap
    infeasibility_m: int | None = None   # consecutive-failure window; None = off
    range_factor: float = 0.2            # steering range as fraction of max extent
    goal_bias: float = 0.05
    k_rrt: float | None = None           # None: 2e(1+1/d) per level
    k_prm: float | None = None
    qmp_k: int = 10
    metric: str = heuristics.INTRINSIC
    importance: str | None = None        # None: per-algorithm default
    importance_eps: float = 0.1
    use_find_section: bool = True
    stop_on_solution: bool = True        # final level: stop at first solution
    d_max: int = 3                       # section recursion depth
    b_max: int = 10                      # fiber sidesteps per recursion step
    motion_resolution: float = 0.01      # fraction of max extent
    shortcut_attempts: int = 100
    sampler: SamplerConfig = field(default_factory=SamplerConfig)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS and self.algorithm not in BASELINE_ALIASES:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.range_factor <= 0:
            raise ValueError("range factor must be positive")
        if not 0.0 <= self.goal_bias < 1.0:
            raise ValueError("goal bias must lie in [0,1)")
        if self.time_limit <= 0:
            raise ValueError("time limit must be positive")
        if self.infeasibility_m is not None and self.infeasibility_m < 1:
            raise ValueError("infeasibility window must be >= 1")
        if self.metric not in heuristics.METRIC_KINDS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.importance is not None \
                and self.importance not in heuristics.IMPORTANCE_KINDS:
            raise ValueError(f"unknown importance {self.importance!r}")


@dataclass
class PlanOutcome:
    status: str
    confidence: float | None = None
    path: PathOnSpace | None = None
    cost: float = float("inf")
    wall_time: float = 0.0
    vertices_per_level: list = field(default_factory=list)
    iterations: int = 0
    cost_trace: list = field(default_factory=list)

    @property
    def solved(self):
        return self.status == SOLVED


# -- level state -------------------------------------------------------------

class Level:
    """Graph, sampler state, and solution bookkeeping for one bundle space."""

    def __init__(self, k, K, space, bundle, base, constraint, start_state,
                 goal, config, tree):
        self.k = k
        self.K = K
        self.space = space
        self.bundle = bundle      # projection onto `base` (None at k=1)
        self.base = base          # Level below, or None
        self.constraint = constraint
        self.start_state = np.asarray(start_state, dtype=float)
        self.goal = goal
        self.config = config
        self.tree = tree
        self.delta = config.motion_resolution * space.max_extent()
        self.range = config.range_factor * space.max_extent()
        self.t = 0
        self.solved = False
        self.infeasible = False
        self.best_cost = float("inf")
        self.goal_vertices = []
        self._best_vertex = None
        self._best_dirty = True
        self._best_path = None
        self._simplified = None
        self._simplified_for = None
        self.witness = None

        self.graph = LevelGraph(space, tree=tree)
        self.start_id = self.graph.add_vertex(self.start_state)
        if tree:
            self.goal_id = None
            self._register_goal_vertex(self.start_id)
        else:
            self.goal_id = self.graph.add_vertex(goal.center)
            # the lone start/goal vertices might already coincide
            self.solved = self.graph.connected(self.start_id, self.goal_id)

    # -- solution bookkeeping ------------------------------------------------

    def _register_goal_vertex(self, vid):
        if self.space.distance(self.graph.state(vid), self.goal.center) \
                <= self.goal.radius:
            self.goal_vertices.append(vid)

    def refresh_best_tree(self):
        """Re-derive the cheapest goal-reaching branch; returns True on improvement."""
        if not self.goal_vertices:
            return False
        costs = [self.graph.cost_to_come[v] for v in self.goal_vertices]
        i = int(np.argmin(costs))
        if costs[i] < self.best_cost - 1e-12:
            self.best_cost = costs[i]
            self._best_vertex = self.goal_vertices[i]
            self._best_dirty = True
            self.solved = True
            return True
        return False

    def refresh_best_roadmap(self):
        if not self.solved:
            return False
        dist, prev = self.graph.dijkstra(self.start_id)
        c = float(dist[self.goal_id])
        improved = c < self.best_cost - 1e-12
        ids = [self.goal_id]
        while ids[-1] != self.start_id:
            ids.append(int(prev[ids[-1]]))
        ids.reverse()
        self._best_path = PathOnSpace(self.space,
                                      self.graph.states_view()[ids].copy())
        self.best_cost = c
        self._best_dirty = False
        return improved

    def best_path(self):
        if not self.solved:
            return None
        if self.tree:
            if self._best_dirty or self._best_path is None:
                ids = self.graph.root_path(self._best_vertex)
                self._best_path = PathOnSpace(self.space,
                                              self.graph.states_view()[ids].copy())
                self._best_dirty = False
        elif self._best_dirty or self._best_path is None:
            self.refresh_best_roadmap()
        return self._best_path

    def simplified_best_path(self, planner):
        """Shortcut-simplified best path, cached per best cost."""
        if not self.solved:
            return None
        if self._simplified is None or self._simplified_for != self.best_cost:
            base = self.best_path()
            self._simplified = shortcut_path(self, base,
                                             self.config.shortcut_attempts,
                                             planner.rng)
            self._simplified_for = self.best_cost
        return self._simplified

    def add_chain(self, attach_id, states):
        """Append a valid polyline to the graph, starting at vertex attach_id."""
        prev = attach_id
        for s in states:
            c = self.space.distance(self.graph.state(prev), s)
            if c == 0.0:
                continue
            vid = self.graph.add_vertex(s)
            if self.tree:
                self.graph.attach(vid, prev, c)
                self._register_goal_vertex(vid)
            else:
                self.graph.add_edge(prev, vid, c)
                self._best_dirty = True
            prev = vid
        return prev


# -- motion checking ---------------------------------------------------------

def check_motion(level, x, y):
    """Validity sweep along the geodesic x..y at the level's resolution."""
    d = level.space.distance(x, y)
    if d == 0.0:
        return bool(level.constraint.valid(x))
    n = int(math.ceil(d / level.delta))
    ts = np.linspace(0.0, 1.0, n + 1)
    pts = level.space.interpolate_path(x, y, ts)
    return bool(level.constraint.valid_many(pts).all())


def shortcut_path(level, path, attempts, rng):
    """Random shortcutting: replace path stretches by valid straight motions."""
    if path.n_waypoints < 2:
        return path
    current = path
    for _ in range(attempts):
        t1, t2 = sorted(rng.uniform(size=2))
        if t2 - t1 < 1e-9:
            continue
        a = current.point_at(t1)
        b = current.point_at(t2)
        direct = level.space.distance(a, b)
        arc = (t2 - t1) * current.length()
        if direct >= arc - 1e-12:
            continue
        if not check_motion(level, a, b):
            continue
        W = current.waypoints
        keep_head = W[current.params < t1]
        keep_tail = W[current.params > t2]
        current = PathOnSpace(level.space,
                              np.vstack([keep_head, a[None], b[None], keep_tail]))
    return current


# -- sampling and neighbor queries -------------------------------------------

def restriction_sample(level, rng):
    """Alg.-style level sampling: uniform at the lowest level, otherwise a
    base draw restricted to the base graph lifted by a uniform fiber."""
    if level.base is None:
        return level.space.sample_uniform(rng)
    planner = level._planner
    bp = level.base.simplified_best_path(planner)
    xb = sample_base(level.base.graph, bp, level.config.sampler, level.t, rng)
    xf = level.bundle.fiber.sample_uniform(rng)
    return level.bundle.lift(xb, xf)


def _metric_distances(level, x):
    if level.config.metric == heuristics.QUOTIENT and level.base is not None:
        return heuristics.quotient_distances_to_vertices(
            level.space, level.bundle, level.base.graph, level.graph, x)
    return level.space.distance_many(level.graph.states_view(), x)


def _nearest(level, x):
    return int(np.argmin(_metric_distances(level, x)))


def _k_nearest(level, x, k, exclude):
    d = _metric_distances(level, x)
    d[exclude] = np.inf
    k = min(k, level.graph.n - 1)
    if k <= 0:
        return []
    idx = np.argpartition(d, k - 1)[:k]
    return [int(i) for i in idx[np.argsort(d[idx], kind="stable")]]


def steer(level, x_near, x_rand):
    d = level.space.distance(x_near, x_rand)
    if d <= level.range:
        return np.asarray(x_rand, dtype=float).copy()
    return level.space.interpolate(x_near, x_rand, level.range / d)


# -- grow functions ----------------------------------------------------------

def grow_qrrt(level, rng):
    """One tree-extension step; returns the new vertex id or None."""
    level.t += 1
    if rng.uniform() < level.config.goal_bias:
        x_rand = level.goal.center.copy()
    else:
        x_rand = restriction_sample(level, rng)
    if level.witness is not None:
        level.witness.observe(x_rand)
    near = _nearest(level, x_rand)
    x_near = level.graph.state(near)
    x_new = steer(level, x_near, x_rand)
    c = level.space.distance(x_near, x_new)
    if c == 0.0:
        return None
    if not check_motion(level, x_near, x_new):
        return None
    vid = level.graph.add_vertex(x_new)
    level.graph.attach(vid, near, c)
    level._register_goal_vertex(vid)
    level.refresh_best_tree()
    return vid


def rewire(x, y, level, motion_cache=None):
    """Reparent y under x when that lowers y's cost-to-come and the
    connecting motion is valid; the delta propagates through y's subtree."""
    if x == y or y == level.start_id:
        return False
    g = level.graph
    c = level.space.distance(g.state(x), g.state(y))
    if g.cost_to_come[x] + c >= g.cost_to_come[y]:
        return False
    if g.is_ancestor(y, x):
        return False
    key = (x, y) if x < y else (y, x)
    if motion_cache is not None and key in motion_cache:
        ok = motion_cache[key]
    else:
        ok = check_motion(level, g.state(x), g.state(y))
        if motion_cache is not None:
            motion_cache[key] = ok
    if not ok:
        return False
    g.reparent(y, x, c)
    return True


def _k_star_constant(level, explicit):
    """k_RRT / k_PRM: the standard dimension-dependent sufficient constant."""
    if explicit is not None:
        return explicit
    d = level.space.dim
    return 2.0 * math.e * (1.0 + 1.0 / d)


def grow_qrrt_star(level, rng):
    """A qrrt step followed by two-way rewiring among the k-nearest."""
    vid = grow_qrrt(level, rng)
    if vid is None:
        return None
    n = level.graph.n
    if n <= 1:
        return vid
    k = int(math.ceil(_k_star_constant(level, level.config.k_rrt) * math.log(n)))
    nbrs = _k_nearest(level, level.graph.state(vid), k, exclude=vid)
    cache = {}
    changed = False
    for nb in nbrs:
        changed |= rewire(nb, vid, level, cache)
    for nb in nbrs:
        changed |= rewire(vid, nb, level, cache)
    if changed:
        level.best_cost = float("inf")  # rewiring may lower goal branches
        level.refresh_best_tree()
    return vid


def grow_qmp(level, rng):
    """One roadmap step: sample, validate, connect to the k nearest."""
    level.t += 1
    x_rand = restriction_sample(level, rng)
    if level.witness is not None:
        level.witness.observe(x_rand)
    if not level.constraint.valid(x_rand):
        return None
    vid = level.graph.add_vertex(x_rand)
    if level.config.algorithm == "qmpstar":
        k = int(math.ceil(_k_star_constant(level, level.config.k_prm)
                          * math.log(level.graph.n)))
    else:
        k = level.config.qmp_k
    for nb in _k_nearest(level, x_rand, k, exclude=vid):
        if level.graph.has_edge(vid, nb):
            continue
        if check_motion(level, x_rand, level.graph.state(nb)):
            cost = level.space.distance(x_rand, level.graph.state(nb))
            level.graph.add_edge(vid, nb, cost)
            level._best_dirty = True
    if not level.solved and level.graph.connected(level.start_id, level.goal_id):
        level.solved = True
    return vid


# -- recursive section search ------------------------------------------------

def _discretize_section(level, sec):
    """Sweep points along a section path plus, per waypoint, its point index."""
    W = sec.waypoints
    pts = [W[0][None, :]]
    wp_pos = [0]
    count = 1
    for i in range(W.shape[0] - 1):
        d = level.space.distance(W[i], W[i + 1])
        n = max(1, int(math.ceil(d / level.delta)))
        ts = np.linspace(0.0, 1.0, n + 1)[1:]
        pts.append(level.space.interpolate_path(W[i], W[i + 1], ts))
        count += n
        wp_pos.append(count - 1)
    return np.vstack(pts), wp_pos


def _clip_base_path(p, x_base):
    """Suffix of p starting from x_base, resuming at the waypoint nearest to
    it (ties toward the later waypoint)."""
    d = p.space.distance_many(p.waypoints, x_base)
    best = len(d) - 1 - int(np.argmin(d[::-1]))
    return p.suffix_from(x_base, best + 1)


def find_section_recursive(level, planner, p, attach_id, depth, ff):
    """Interpolate an L1 section over p, keep its valid prefix, and either
    reach the goal or sidestep along the fiber and recurse on the rest."""
    cfg = level.config
    if depth >= cfg.d_max:
        return False
    g = level.graph
    x_a = g.state(attach_id).copy()
    goal_fiber = level.bundle.project_fiber(level.goal.center)
    x_b = level.bundle.lift(p.waypoints[-1], goal_fiber)
    sec = section_l1(level.bundle, p, x_a, x_b, "FF" if ff else "FL")
    pts, wp_pos = _discretize_section(level, sec)
    valid = level.constraint.valid_many(pts)
    if valid.all():
        last = level.add_chain(attach_id, sec.waypoints[1:])
        _commit_section_goal(level, last)
        return True
    first_bad = int(np.argmin(valid))
    if first_bad == 0:
        return False  # attach state itself rejected (should not happen)
    # waypoints fully covered by the valid prefix
    w_keep = 0
    for w, pos in enumerate(wp_pos):
        if pos <= first_bad - 1:
            w_keep = w
    chain = [sec.waypoints[i] for i in range(1, w_keep + 1)]
    chain.append(pts[first_bad - 1])
    last_id = level.add_chain(attach_id, chain)
    x_last = g.state(last_id)
    x_base = level.bundle.project(x_last)
    for _ in range(cfg.b_max):
        f_rand = level.bundle.fiber.sample_uniform(planner.rng)
        x_j = level.bundle.lift(x_base, f_rand)
        if not check_motion(level, x_last, x_j):
            continue
        vid = level.add_chain(last_id, [x_j])
        p_j = _clip_base_path(p, x_base)
        return find_section_recursive(level, planner, p_j, vid, depth + 1, not ff)
    return False


def _commit_section_goal(level, last_id):
    if level.tree:
        level.refresh_best_tree()
    else:
        gstate = level.graph.state(level.goal_id)
        lstate = level.graph.state(last_id)
        if last_id != level.goal_id and not level.graph.has_edge(last_id,
                                                                level.goal_id):
            c = level.space.distance(lstate, gstate)
            if check_motion(level, lstate, gstate):
                level.graph.add_edge(last_id, level.goal_id, c)
                level._best_dirty = True
        if level.graph.connected(level.start_id, level.goal_id):
            level.solved = True


def find_section(level, planner):
    """Try to unproject the base solution: fiber-first, then fiber-last."""
    if level.bundle is None or level.base is None or not level.base.solved:
        return False
    p = level.base.best_path()
    ok = find_section_recursive(level, planner, p, level.start_id, 0, True)
    if not ok and not ptc(level, level.config, planner.elapsed):
        ok = find_section_recursive(level, planner, p, level.start_id, 0, False)
    return ok


# -- termination -------------------------------------------------------------

def ptc(level, config, clock):
    """Level termination: solution, clock, budget, or established infeasibility."""
    if level.infeasible:
        return True
    if level.solved and (config.stop_on_solution or level.k < level.K):
        return True
    if clock() >= config.time_limit:
        return True
    if config.level_budget is not None and level.t >= config.level_budget:
        return True
    return False


# -- infeasibility witness ---------------------------------------------------

class VisibilityWitness:
    """Sparse visibility cover fed by the level's samples.

    A sample is useful when it is valid and either uncovers new territory
    (no guard sees it) or merges two guard components. After m consecutive
    useless samples with the start and goal guards still in different
    components, the level is declared infeasible with confidence 1 - 1/m.
    """

    def __init__(self, level, m):
        self.level = level
        self.m = m
        self.guards = [level.start_state.copy(), level.goal.center.copy()]
        self._parent = [0, 1]
        self.counter = 0
        self.triggered = False

    def _find(self, i):
        while self._parent[i] != i:
            self._parent[i] = self._parent[self._parent[i]]
            i = self._parent[i]
        return i

    def observe(self, x):
        if self.triggered:
            return
        useful = False
        if self.level.constraint.valid(x):
            seen = []
            groups = {}
            for gi in range(len(self.guards)):
                groups.setdefault(self._find(gi), []).append(gi)
            for root, members in groups.items():
                for gi in members:
                    if check_motion(self.level, x, self.guards[gi]):
                        seen.append(root)
                        break
                if len(seen) >= 2:
                    break
            if not seen:
                self.guards.append(np.asarray(x, dtype=float).copy())
                self._parent.append(len(self._parent))
                useful = True
            elif len(seen) >= 2:
                a, b = self._find(seen[0]), self._find(seen[1])
                self._parent[max(a, b)] = min(a, b)
                useful = True
        if useful:
            self.counter = 0
            return
        self.counter += 1
        if self.counter >= self.m and self._find(0) != self._find(1):
            self.triggered = True
            self.level.infeasible = True


# -- the planner loop --------------------------------------------------------

class BundlePlanner:
    def __init__(self, problem, config):
        algorithm = config.algorithm
        if algorithm in BASELINE_ALIASES:
            problem = problem.flatten()
            algorithm = BASELINE_ALIASES[algorithm]
            config = _replace_algorithm(config, algorithm)
        self.problem = problem
        self.config = config
        self.rng = np.random.default_rng(config.seed)
        self._t0 = None
        self.cost_trace = []
        self.infeasible_confidence = None

        tree = algorithm in TREE_ALGORITHMS
        if config.importance is None:
            self.importance_kind = (heuristics.EXPONENTIAL if tree
                                    else heuristics.EPSILON_GREEDY)
        else:
            self.importance_kind = config.importance

        # project start and goal down the bundle chain
        K = problem.K
        starts = [None] * K
        goal_centers = [None] * K
        starts[K - 1] = problem.start
        goal_centers[K - 1] = problem.goal.center
        for i in range(K - 2, -1, -1):
            b = problem.bundles[i]
            starts[i] = b.project(starts[i + 1])
            goal_centers[i] = b.project(goal_centers[i + 1])

        self.levels = []
        for i in range(K):
            bundle = problem.bundles[i - 1] if i > 0 else None
            base = self.levels[i - 1] if i > 0 else None
            goal = GoalRegion(np.asarray(goal_centers[i], dtype=float),
                              problem.goal.radius)
            lvl = Level(i + 1, K, problem.spaces[i], bundle, base,
                        problem.constraints[i], starts[i], goal, config, tree)
            lvl._planner = self
            if config.infeasibility_m is not None:
                lvl.witness = VisibilityWitness(lvl, config.infeasibility_m)
            self.levels.append(lvl)

        self._grow = grow_qrrt if algorithm == "qrrt" else \
            grow_qrrt_star if algorithm == "qrrtstar" else grow_qmp
        self._roadmap_refresh_every = 200

    def elapsed(self):
        return 0.0 if self._t0 is None else time.perf_counter() - self._t0

    def _importance(self, level):
        return heuristics.importance(self.importance_kind, level.k,
                                     level.graph.n, level.space.dim, level.K,
                                     eps=self.config.importance_eps)

    def _note_final_cost(self, iterations):
        final = self.levels[-1]
        if final.solved and np.isfinite(final.best_cost):
            if not self.cost_trace or final.best_cost < self.cost_trace[-1][1] - 1e-12:
                self.cost_trace.append((iterations, final.best_cost))

    def run(self):
        self._t0 = time.perf_counter()
        cfg = self.config
        final = self.levels[-1]

        for lvl in self.levels:
            if not lvl.constraint.valid(lvl.start_state):
                return self._outcome(INFEASIBLE, confidence=1.0)

        active = []
        iterations = 0
        aborted = False
        for lvl in self.levels:
            if cfg.use_find_section:
                find_section(lvl, self)
                if lvl is final:
                    if not final.tree and final.solved:
                        final.refresh_best_roadmap()
                    self._note_final_cost(iterations)
            active.append(lvl)
            while not ptc(lvl, cfg, self.elapsed):
                sel = max(active, key=lambda l: (self._importance(l), -l.k))
                self._grow(sel, self.rng)
                iterations += 1
                if sel is final and final.tree:
                    self._note_final_cost(iterations)
                elif sel is final and final.solved \
                        and iterations % self._roadmap_refresh_every == 0:
                    final.refresh_best_roadmap()
                    self._note_final_cost(iterations)
                if sel.infeasible:
                    aborted = True
                    break
            if aborted or lvl.infeasible:
                aborted = True
                break

        if aborted:
            m = cfg.infeasibility_m
            return self._outcome(INFEASIBLE, confidence=1.0 - 1.0 / m,
                                 iterations=iterations)
        if final.solved:
            if not final.tree:
                final.refresh_best_roadmap()
                self._note_final_cost(iterations)
            return self._outcome(SOLVED, iterations=iterations)
        return self._outcome(TIMEDOUT, iterations=iterations)

    def _outcome(self, status, confidence=None, iterations=0):
        final = self.levels[-1]
        path = final.best_path() if status == SOLVED else None
        return PlanOutcome(
            status=status,
            confidence=confidence,
            path=path,
            cost=final.best_cost if status == SOLVED else float("inf"),
            wall_time=self.elapsed(),
            vertices_per_level=[l.graph.n for l in self.levels],
            iterations=iterations,
            cost_trace=list(self.cost_trace),
        )


def _replace_algorithm(config, algorithm):
    from dataclasses import replace
    return replace(config, algorithm=algorithm)


def plan(problem, config):
    """Run the multilevel planner once and return its outcome."""
    return BundlePlanner(problem, config).run()
