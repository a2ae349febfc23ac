"""Composite state spaces: bounded real vectors, planar angles, and products.

A state is a flat float64 numpy array; the space descriptor knows which
coordinates are box-bounded reals and which are angles. Distances combine
per-component geodesics in a weighted L2 sense.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_angle(a):
    """Normalize angles to [-pi, pi). Works on scalars and arrays."""
    return (a + np.pi) % TWO_PI - np.pi


@dataclass(frozen=True)
class RealVector:
    """Axis-aligned box in R^n. Bounds stored as tuples so descriptors hash."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        if len(self.lower) != len(self.upper) or len(self.lower) == 0:
            raise ValueError("RealVector bounds must be nonempty and equal length")
        for lo, hi in zip(self.lower, self.upper):
            if not lo < hi:
                raise ValueError(f"RealVector bound violated: {lo} >= {hi}")

    @property
    def dim(self):
        return len(self.lower)


@dataclass(frozen=True)
class SO2:
    """Planar rotation, one angle in [-pi, pi) with wrap-around arithmetic."""

    @property
    def dim(self):
        return 1


def se2_components(x_lower, x_upper, y_lower, y_upper):
    """Planar rigid-body pose: position box plus one angle.

    Returned as two primitive components so projections can keep the
    position while dropping the orientation.
    """
    return [RealVector((float(x_lower), float(y_lower)),
                       (float(x_upper), float(y_upper))), SO2()]


class StateSpace:
    """Product of RealVector and SO2 components with a weighted L2 metric."""

    def __init__(self, components, weights=None):
        components = tuple(components)
        if not components:
            raise ValueError("StateSpace needs at least one component")
        if weights is None:
            weights = tuple(1.0 for _ in components)
        else:
            weights = tuple(float(w) for w in weights)
        if len(weights) != len(components):
            raise ValueError("one weight per component required")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be strictly positive")
        self.components = components
        self.weights = weights

        lo, hi, wdim, angle = [], [], [], []
        for comp, w in zip(components, weights):
            if isinstance(comp, RealVector):
                lo.extend(comp.lower)
                hi.extend(comp.upper)
                wdim.extend([w] * comp.dim)
                angle.extend([False] * comp.dim)
            elif isinstance(comp, SO2):
                lo.append(-np.pi)
                hi.append(np.pi)
                wdim.append(w)
                angle.append(True)
            else:
                raise TypeError(f"unknown component kind: {comp!r}")
        self._lo = np.asarray(lo, dtype=float)
        self._hi = np.asarray(hi, dtype=float)
        self._wdim = np.asarray(wdim, dtype=float)
        self._angle = np.asarray(angle, dtype=bool)
        self._has_angle = bool(self._angle.any())
        ext = self._hi - self._lo
        ext[self._angle] = np.pi
        self._max_extent = float(np.sqrt(np.sum((self._wdim * ext) ** 2)))

    # -- descriptor identity -------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, StateSpace)
                and self.components == other.components
                and self.weights == other.weights)

    def __hash__(self):
        return hash((self.components, self.weights))

    def __repr__(self):
        return f"StateSpace({list(self.components)!r}, weights={list(self.weights)!r})"

    @property
    def dim(self):
        return self._lo.shape[0]

    @property
    def lower(self):
        return self._lo

    @property
    def upper(self):
        return self._hi

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"state has shape {x.shape}, space dim is {self.dim}")
        return x

    # -- metric --------------------------------------------------------------

    def _diff(self, x, y):
        d = y - x
        if self._has_angle:
            d[..., self._angle] = wrap_angle(d[..., self._angle])
        return d

    def _absdiff(self, x, y):
        # |y-x| is exactly symmetric, so the metric is too (wrap_angle is not)
        d = np.abs(y - x)
        if self._has_angle:
            m = d[..., self._angle] % TWO_PI
            d[..., self._angle] = np.minimum(m, TWO_PI - m)
        return d

    def distance(self, x, y):
        x, y = self._check(x), self._check(y)
        return float(np.sqrt(np.sum((self._wdim * self._absdiff(x, y)) ** 2)))

    def distance_many(self, X, y):
        """Distances from each row of X (shape (N, dim)) to state y."""
        X = np.asarray(X, dtype=float)
        y = self._check(y)
        d = self._absdiff(X, y[None, :])
        return np.sqrt(np.sum((self._wdim[None, :] * d) ** 2, axis=1))

    def max_extent(self):
        return self._max_extent

    # -- interpolation -------------------------------------------------------

    def interpolate(self, x, y, t):
        x, y = self._check(x), self._check(y)
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"interpolation parameter {t} outside [0,1]")
        r = x + t * self._diff(x, y)
        if self._has_angle:
            r[self._angle] = wrap_angle(r[self._angle])
        return r

    def interpolate_path(self, x, y, ts):
        """Geodesic points at parameters ts, returned as an (len(ts), dim) array."""
        x, y = self._check(x), self._check(y)
        ts = np.asarray(ts, dtype=float)
        r = x[None, :] + ts[:, None] * self._diff(x, y)[None, :]
        if self._has_angle:
            r[:, self._angle] = wrap_angle(r[:, self._angle])
        return r

    # -- sampling ------------------------------------------------------------

    def sample_uniform(self, rng):
        return rng.uniform(self._lo, self._hi)

    def sample_uniform_many(self, rng, n):
        return rng.uniform(self._lo, self._hi, size=(n, self.dim))

    # -- misc ----------------------------------------------------------------

    def normalize(self, x):
        x = self._check(x).copy()
        if self._has_angle:
            x[self._angle] = wrap_angle(x[self._angle])
        return x

    def contains(self, x, tol=1e-9):
        x = self._check(x)
        return bool(np.all(x >= self._lo - tol) and np.all(x <= self._hi + tol))


def real_vector_space(lower, upper, weight=1.0):
    """Single-box shorthand used all over the environments."""
    return StateSpace([RealVector(tuple(float(v) for v in lower),
                                  tuple(float(v) for v in upper))], [weight])


def unit_box_space(n):
    return real_vector_space([0.0] * n, [1.0] * n)
