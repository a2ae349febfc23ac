import numpy as np
import pytest

from fiberplan.bundles import Bundle, PathOnSpace, Prefix
from fiberplan.graph import LevelGraph
from fiberplan.samplers import (DecaySchedule, SamplerConfig, decay,
                                sample_base, sample_graph, sample_in_ball,
                                sample_path_restriction)
from fiberplan.spaces import real_vector_space, unit_box_space


# -- decay schedule ----------------------------------------------------------

def test_decay_at_zero_is_k0():
    assert decay(DecaySchedule(1.0, 0.1, 1e-3), 0.0) == 1.0
    assert decay(DecaySchedule(-3.0, 7.0, 0.5), 0.0) == -3.0


def test_decay_reference_value():
    # 0.1 + 0.9/e
    assert decay(DecaySchedule(1.0, 0.1, 1e-3), 1000.0) == pytest.approx(
        0.43109149705, abs=1e-6)


def test_decay_limit_is_k1():
    assert decay(DecaySchedule(1.0, 0.1, 1e-3), 1e7) == pytest.approx(
        0.1, abs=1e-6)


def test_decay_rejects_negative_time():
    with pytest.raises(ValueError):
        decay(DecaySchedule(1.0, 0.0, 1.0), -1.0)
    with pytest.raises(ValueError):
        DecaySchedule(1.0, 0.0, -1.0)


# -- graph strategies --------------------------------------------------------

def single_vertex_graph(v=0.5):
    g = LevelGraph(unit_box_space(1))
    g.add_vertex(np.array([v]))
    return g


def test_rv_single_vertex():
    g = single_vertex_graph(0.3)
    rng = np.random.default_rng(0)
    for _ in range(10):
        assert sample_graph("rv", g, rng)[0] == 0.3


def test_re_samples_on_edge():
    g = LevelGraph(unit_box_space(2))
    g.add_vertex(np.array([0.0, 0.0]))
    g.add_vertex(np.array([1.0, 0.0]))
    g.add_edge(0, 1, 1.0)
    rng = np.random.default_rng(1)
    xs = [sample_graph("re", g, rng) for _ in range(200)]
    assert all(x[1] == 0.0 for x in xs)
    assert min(x[0] for x in xs) < 0.1 and max(x[0] for x in xs) > 0.9


def test_re_falls_back_to_rv_without_edges():
    g = single_vertex_graph(0.7)
    rng = np.random.default_rng(2)
    assert sample_graph("re", g, rng)[0] == 0.7


def test_rdv_degree_bias_ratio():
    # star: center degree 3, leaves degree 1; weights 1/4 vs 1/2
    g = LevelGraph(unit_box_space(1))
    for v in (0.5, 0.0, 0.9, 1.0):
        g.add_vertex(np.array([v]))
    for leaf in (1, 2, 3):
        g.add_edge(0, leaf, 1.0)
    rng = np.random.default_rng(3)
    n = 100_000
    hits = np.zeros(4)
    for _ in range(n):
        x = sample_graph("rdv", g, rng)
        hits[[0.5, 0.0, 0.9, 1.0].index(x[0])] += 1
    ratio = hits[1] / hits[0]
    assert ratio == pytest.approx(2.0, rel=0.05)


def test_empty_graph_rejected():
    g = LevelGraph(unit_box_space(1))
    with pytest.raises(ValueError):
        sample_graph("rv", g, np.random.default_rng(0))


# -- path restriction --------------------------------------------------------

def test_path_restriction_uniform_mean():
    p = PathOnSpace(unit_box_space(1), [[0.0], [1.0]])
    rng = np.random.default_rng(4)
    xs = np.array([sample_path_restriction(p, rng)[0] for _ in range(100_000)])
    assert abs(xs.mean() - 0.5) < 0.01


def test_path_restriction_single_waypoint():
    p = PathOnSpace(unit_box_space(2), [[0.2, 0.8]])
    rng = np.random.default_rng(5)
    assert np.allclose(sample_path_restriction(p, rng), [0.2, 0.8])


def test_path_restriction_stays_on_path():
    p = PathOnSpace(unit_box_space(2), [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
    rng = np.random.default_rng(6)
    for _ in range(500):
        x = sample_path_restriction(p, rng)
        on_first = abs(x[1]) <= 1e-9 and 0 <= x[0] <= 1
        on_second = abs(x[0] - 1.0) <= 1e-9 and 0 <= x[1] <= 1
        assert on_first or on_second


# -- combined base draw ------------------------------------------------------

def test_path_bias_probability_schedule():
    cfg = SamplerConfig(path_bias="decay", beta_fixed=0.1, decay_lambda=1e-3)
    ps = [cfg.path_bias_probability(t) for t in (0, 100, 1000, 10_000)]
    assert ps[0] == 1.0
    assert all(a > b for a, b in zip(ps, ps[1:]))
    assert ps[-1] == pytest.approx(0.1, abs=1e-4)
    assert SamplerConfig(path_bias="fixed", beta_fixed=0.3) \
        .path_bias_probability(999) == 0.3
    assert SamplerConfig(path_bias="off").path_bias_probability(0) == 0.0


def test_sample_base_prefers_path_at_t0():
    # graph and path are disjoint, so the source of each draw is observable
    g = single_vertex_graph(0.0)
    path = PathOnSpace(unit_box_space(1), [[0.8], [1.0]])
    cfg = SamplerConfig(strategy="rv", path_bias="decay")
    rng = np.random.default_rng(7)
    for _ in range(50):
        x = sample_base(g, path, cfg, 0, rng)
        assert x[0] >= 0.8


def test_sample_base_fallback_without_path():
    g = single_vertex_graph(0.4)
    cfg = SamplerConfig(strategy="rv")
    rng = np.random.default_rng(8)
    assert sample_base(g, None, cfg, 0, rng)[0] == 0.4


def test_nbh_zero_radius_at_t0():
    g = single_vertex_graph(0.4)
    cfg = SamplerConfig(strategy="nbh", path_bias="off")
    rng = np.random.default_rng(9)
    assert sample_base(g, None, cfg, 0, rng)[0] == 0.4
    # later the ball has positive radius
    xs = [sample_base(g, None, cfg, 5000, rng)[0] for _ in range(50)]
    assert max(abs(x - 0.4) for x in xs) > 0.0


def test_sample_in_ball_respects_radius_and_bounds():
    space = unit_box_space(2)
    rng = np.random.default_rng(10)
    c = np.array([0.95, 0.5])
    for _ in range(200):
        x = sample_in_ball(space, c, 0.2, rng)
        assert space.distance(c, x) <= 0.2 + 1e-9
        assert space.contains(x)


def test_sampler_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(strategy="bogus")
    with pytest.raises(ValueError):
        SamplerConfig(beta_fixed=1.5)
    with pytest.raises(ValueError):
        SamplerConfig(path_bias="sometimes")


def test_sample_base_deterministic():
    def stream(seed):
        g = LevelGraph(unit_box_space(1))
        g.add_vertex(np.array([0.1]))
        g.add_vertex(np.array([0.9]))
        g.add_edge(0, 1, 0.8)
        cfg = SamplerConfig()
        rng = np.random.default_rng(seed)
        return [sample_base(g, None, cfg, t, rng)[0] for t in range(50)]

    assert stream(42) == stream(42)


# -- restriction through a bundle --------------------------------------------

def test_restriction_projects_onto_base_graph():
    from fiberplan.environments import FreeSpace, GoalRegion, PlanningProblem
    from fiberplan.planners import BundlePlanner, PlannerConfig, \
        restriction_sample

    total = unit_box_space(2)
    bundle = Bundle.from_tags(total, [Prefix(1)])
    problem = PlanningProblem(
        "free", [bundle.base, total], [bundle], [FreeSpace(), FreeSpace()],
        np.array([0.0, 0.0]), GoalRegion(np.array([1.0, 1.0]), 0.0))
    planner = BundlePlanner(problem, PlannerConfig(algorithm="qrrt", seed=0))
    lvl = planner.levels[1]
    base_graph = planner.levels[0].graph
    base_graph.add_vertex(np.array([0.3]))
    base_graph.add_edge(0, 1, 0.3)
    rng = np.random.default_rng(11)
    for _ in range(2000):
        x = restriction_sample(lvl, rng)
        assert 0.0 - 1e-9 <= x[0] <= 0.3 + 1e-9  # base part on the graph edge


def test_restriction_k1_matches_uniform_stream():
    from fiberplan.environments import FreeSpace, GoalRegion, PlanningProblem
    from fiberplan.planners import BundlePlanner, PlannerConfig, \
        restriction_sample

    total = unit_box_space(3)
    problem = PlanningProblem("flat", [total], [], [FreeSpace()],
                              np.zeros(3), GoalRegion(np.ones(3), 0.0))
    planner = BundlePlanner(problem, PlannerConfig(algorithm="qrrt", seed=0))
    lvl = planner.levels[0]
    xs = [restriction_sample(lvl, np.random.default_rng(123)) for _ in range(1)]
    ys = [total.sample_uniform(np.random.default_rng(123)) for _ in range(1)]
    assert np.array_equal(xs[0], ys[0])
    r1, r2 = np.random.default_rng(5), np.random.default_rng(5)
    for _ in range(20):
        assert np.array_equal(restriction_sample(lvl, r1),
                              total.sample_uniform(r2))
