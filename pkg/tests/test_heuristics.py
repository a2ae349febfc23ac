import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiberplan.bundles import Bundle, Prefix
from fiberplan.graph import LevelGraph
from fiberplan.heuristics import (EPSILON_GREEDY, EXPONENTIAL, UNIFORM,
                                  epsilon_greedy_weight, importance,
                                  quotient_distances_to_vertices,
                                  quotient_metric)
from fiberplan.spaces import real_vector_space


def line_bundle():
    total = real_vector_space([0.0, 0.0], [2.0, 2.0])
    return Bundle.from_tags(total, [Prefix(1)])


def chain_base_graph(values=(0.0, 1.0, 2.0)):
    g = LevelGraph(real_vector_space([0.0], [2.0]))
    for v in values:
        g.add_vertex(np.array([v]))
    for i in range(len(values) - 1):
        g.add_edge(i, i + 1, abs(values[i + 1] - values[i]))
    return g


# -- quotient metric ----------------------------------------------------------

def test_quotient_same_vertex_reduces_to_total_distance():
    b = line_bundle()
    g = chain_base_graph()
    x1 = np.array([0.9, 0.0])
    x2 = np.array([1.1, 1.0])  # both snap to base vertex 1.0
    want = b.total.distance(x1, x2)
    assert quotient_metric(b.total, b, g, x1, x2) == pytest.approx(want)


def test_quotient_chain_value():
    # fiber 1 + base offsets 0 + graph path length 2
    b = line_bundle()
    g = chain_base_graph()
    d = quotient_metric(b.total, b, g, np.array([0.0, 0.0]),
                        np.array([2.0, 1.0]))
    assert d == pytest.approx(3.0, abs=1e-12)


def test_quotient_disconnected_is_infinite():
    b = line_bundle()
    g = LevelGraph(real_vector_space([0.0], [2.0]))
    g.add_vertex(np.array([0.0]))
    g.add_vertex(np.array([2.0]))
    d = quotient_metric(b.total, b, g, np.array([0.0, 0.0]),
                        np.array([2.0, 0.0]))
    assert d == np.inf


def test_quotient_symmetry():
    b = line_bundle()
    g = chain_base_graph()
    rng = np.random.default_rng(0)
    for _ in range(100):
        x1 = b.total.sample_uniform(rng)
        x2 = b.total.sample_uniform(rng)
        d12 = quotient_metric(b.total, b, g, x1, x2)
        d21 = quotient_metric(b.total, b, g, x2, x1)
        assert d12 == pytest.approx(d21, abs=1e-9)
        assert d12 >= 0


def test_vectorized_quotient_matches_scalar():
    b = line_bundle()
    base_graph = chain_base_graph((0.0, 0.7, 1.3, 2.0))
    level_graph = LevelGraph(b.total)
    rng = np.random.default_rng(1)
    for _ in range(40):
        level_graph.add_vertex(b.total.sample_uniform(rng))
    x = b.total.sample_uniform(rng)
    D = quotient_distances_to_vertices(b.total, b, base_graph, level_graph, x)
    for i in range(level_graph.n):
        want = quotient_metric(b.total, b, base_graph,
                               level_graph.state(i), x)
        assert D[i] == pytest.approx(want, abs=1e-9)


# -- importance ---------------------------------------------------------------

def test_uniform_importance_examples():
    assert importance(UNIFORM, 1, 0, 3, 1) == 1.0
    assert importance(UNIFORM, 1, 9, 3, 1) == pytest.approx(0.1)


def test_exponential_importance_exact_value():
    assert importance(EXPONENTIAL, 1, 16, 4, 1) == pytest.approx(1.0 / 3.0)


def test_greedy_weights_k3():
    assert epsilon_greedy_weight(3, 3, 0.1) == pytest.approx(0.9)
    assert epsilon_greedy_weight(2, 3, 0.1) == pytest.approx(0.09)
    assert epsilon_greedy_weight(1, 3, 0.1) == pytest.approx(0.01)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 0.99), st.integers(1, 12))
def test_greedy_weights_sum_to_one(eps, K):
    s = math.fsum(epsilon_greedy_weight(k, K, eps) for k in range(1, K + 1))
    assert s == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([UNIFORM, EXPONENTIAL, EPSILON_GREEDY]),
       st.integers(0, 10_000), st.integers(1, 20), st.integers(1, 5))
def test_importance_range_and_monotonicity(kind, n, d, k):
    K = 5
    v = importance(kind, k, n, d, K)
    assert 0.0 < v <= 1.0
    assert importance(kind, k, n + 1, d, K) < v


def test_importance_vanishes_for_huge_graphs():
    for kind in (UNIFORM, EXPONENTIAL, EPSILON_GREEDY):
        assert importance(kind, 1, 10 ** 12, 2, 2) < 1e-3


def test_importance_argument_validation():
    with pytest.raises(ValueError):
        importance(UNIFORM, 0, 5, 3, 1)
    with pytest.raises(ValueError):
        importance("bogus", 1, 5, 3, 1)
    with pytest.raises(ValueError):
        epsilon_greedy_weight(1, 3, 1.5)
