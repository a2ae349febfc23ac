import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiberplan.spaces import (SO2, RealVector, StateSpace, real_vector_space,
                              se2_components, unit_box_space, wrap_angle)

TWO_PI = 2.0 * np.pi


def se2_space():
    return StateSpace(se2_components(0.0, 10.0, 0.0, 10.0))


def test_distance_euclidean_r2():
    s = real_vector_space([-10, -10], [10, 10])
    assert s.distance(np.array([0.0, 0.0]), np.array([3.0, 4.0])) == 5.0


def test_distance_so2_shortest_arc():
    s = StateSpace([SO2()])
    a = np.array([0.1])
    b = s.normalize(np.array([TWO_PI - 0.1]))
    assert s.distance(a, b) == pytest.approx(0.2, abs=1e-12)


def test_distance_se2_compound():
    s = se2_space()
    x = np.array([0.0, 0.0, 0.0])
    y = np.array([1.0, 0.0, np.pi - 1e-12])
    assert s.distance(x, y) == pytest.approx(np.sqrt(1 + np.pi ** 2), abs=1e-9)


def test_interpolate_endpoints_and_linearity():
    s = real_vector_space([0.0], [4.0])
    x, y = np.array([0.0]), np.array([4.0])
    assert np.array_equal(s.interpolate(x, y, 0.0), x)
    assert np.array_equal(s.interpolate(x, y, 1.0), y)
    assert s.interpolate(x, y, 0.25)[0] == 1.0


def test_interpolate_so2_wraps_through_seam():
    # from -3 to 3 the short way crosses the chart seam, not zero
    s = StateSpace([SO2()])
    mid = s.interpolate(np.array([-3.0]), np.array([3.0]), 0.5)
    assert mid[0] == pytest.approx(-np.pi, abs=1e-12)
    d = s.distance(np.array([-3.0]), np.array([3.0]))
    assert s.distance(np.array([-3.0]), mid) == pytest.approx(d / 2, abs=1e-9)


def test_interpolate_rejects_bad_parameter():
    s = unit_box_space(2)
    with pytest.raises(ValueError):
        s.interpolate(np.zeros(2), np.ones(2), 1.5)


def test_sample_uniform_mean_and_bounds():
    s = unit_box_space(1)
    rng = np.random.default_rng(0)
    X = s.sample_uniform_many(rng, 100_000)
    assert 0.49 <= X.mean() <= 0.51
    assert X.min() >= 0.0 and X.max() <= 1.0


def test_sample_uniform_deterministic():
    s = se2_space()
    r1, r2 = np.random.default_rng(7), np.random.default_rng(7)
    a = [s.sample_uniform(r1) for _ in range(5)]
    b = [s.sample_uniform(r2) for _ in range(5)]
    assert all(np.array_equal(u, v) for u, v in zip(a, b))


def test_max_extent():
    assert unit_box_space(2).max_extent() == pytest.approx(np.sqrt(2))
    assert StateSpace([SO2()]).max_extent() == pytest.approx(np.pi)
    assert unit_box_space(100).max_extent() == pytest.approx(10.0)


def test_bad_constructions():
    with pytest.raises(ValueError):
        RealVector((0.0,), (0.0,))
    with pytest.raises(ValueError):
        StateSpace([])
    with pytest.raises(ValueError):
        StateSpace([SO2()], [0.0])
    with pytest.raises(ValueError):
        unit_box_space(2).distance(np.zeros(3), np.zeros(3))


def test_descriptor_equality_and_hash():
    assert unit_box_space(3) == unit_box_space(3)
    assert hash(unit_box_space(3)) == hash(unit_box_space(3))
    assert unit_box_space(3) != unit_box_space(4)


# -- metric properties over the shipped component kinds ----------------------

def _se2_states(draw_floats):
    return st.tuples(draw_floats(0.0, 10.0), draw_floats(0.0, 10.0),
                     draw_floats(-np.pi, np.pi - 1e-9))


coord = lambda lo, hi: st.floats(lo, hi, allow_nan=False, width=64)
se2_state = st.tuples(coord(0.0, 10.0), coord(0.0, 10.0),
                      coord(-np.pi, np.pi - 1e-9)).map(np.array)


@settings(max_examples=200, deadline=None)
@given(se2_state, se2_state)
def test_symmetry_exact(x, y):
    s = se2_space()
    assert s.distance(x, y) == s.distance(y, x)


@settings(max_examples=200, deadline=None)
@given(se2_state, se2_state, se2_state)
def test_triangle_inequality(x, y, z):
    s = se2_space()
    assert s.distance(x, z) <= s.distance(x, y) + s.distance(y, z) + 1e-9


@settings(max_examples=200, deadline=None)
@given(se2_state, se2_state, coord(0.0, 1.0))
def test_geodesic_property(x, y, t):
    s = se2_space()
    m = s.interpolate(x, y, t)
    assert s.distance(x, m) == pytest.approx(t * s.distance(x, y), abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(se2_state, se2_state, coord(0.0, 1.0))
def test_angles_stay_normalized(x, y, t):
    s = se2_space()
    out = s.interpolate(x, y, t)
    assert -np.pi <= out[2] < np.pi


def test_wrap_angle_range():
    a = np.linspace(-20, 20, 1001)
    w = wrap_angle(a)
    assert np.all(w >= -np.pi) and np.all(w < np.pi)
    assert np.allclose(np.cos(w), np.cos(a)) and np.allclose(np.sin(w), np.sin(a))
