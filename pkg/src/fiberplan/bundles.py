"""Bundle structure over composite spaces.

A bundle splits a total space into a base part and a fiber part via a
per-component projection. Trivial bundles are coordinate splits; the
Moebius bundle demonstrates a nontrivial twist in a single chart
[-pi, pi) x [0, 1] with the seam identification (seam, u) ~ (seam, 1 - u).

Also provides piecewise-geodesic paths and the three path-section
interpolators (L2, fiber-first, fiber-last).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spaces import SO2, RealVector, StateSpace, wrap_angle

SECTION_TOL = 1e-9


# -- projection tags ---------------------------------------------------------

@dataclass(frozen=True)
class Keep:
    """Component stays in the base."""


@dataclass(frozen=True)
class Drop:
    """Component goes to the fiber."""


@dataclass(frozen=True)
class Prefix:
    """First m coordinates of a RealVector to the base, the rest to the fiber."""

    m: int


class Bundle:
    """Total space, base space, fiber space, and the index maps between them."""

    def __init__(self, total, base, fiber, base_idx, fiber_idx, tags=None,
                 twist="trivial"):
        self.total = total
        self.base = base
        self.fiber = fiber
        self.base_idx = np.asarray(base_idx, dtype=int)
        self.fiber_idx = np.asarray(fiber_idx, dtype=int)
        self.tags = tuple(tags) if tags is not None else None
        self.twist = twist
        if base.dim + fiber.dim != total.dim:
            raise ValueError("base and fiber dims must partition the total dim")

    # -- construction --------------------------------------------------------

    @classmethod
    def from_tags(cls, total, tags):
        """Build a trivial bundle from one projection tag per component."""
        tags = tuple(tags)
        if len(tags) != len(total.components):
            raise ValueError("one projection tag per component required")
        base_comps, base_w, fiber_comps, fiber_w = [], [], [], []
        base_idx, fiber_idx = [], []
        off = 0
        nontrivial = False
        for comp, w, tag in zip(total.components, total.weights, tags):
            d = comp.dim
            idx = list(range(off, off + d))
            if isinstance(tag, Keep):
                base_comps.append(comp)
                base_w.append(w)
                base_idx.extend(idx)
            elif isinstance(tag, Drop):
                fiber_comps.append(comp)
                fiber_w.append(w)
                fiber_idx.extend(idx)
                nontrivial = True
            elif isinstance(tag, Prefix):
                if not isinstance(comp, RealVector):
                    raise ValueError("Prefix applies to RealVector components only")
                if not 0 < tag.m < d:
                    raise ValueError(f"Prefix split {tag.m} outside (0,{d})")
                base_comps.append(RealVector(comp.lower[:tag.m], comp.upper[:tag.m]))
                base_w.append(w)
                base_idx.extend(idx[:tag.m])
                fiber_comps.append(RealVector(comp.lower[tag.m:], comp.upper[tag.m:]))
                fiber_w.append(w)
                fiber_idx.extend(idx[tag.m:])
                nontrivial = True
            else:
                raise TypeError(f"unknown projection tag: {tag!r}")
            off += d
        if not nontrivial:
            raise ValueError("projection must move something to the fiber")
        base = StateSpace(base_comps, base_w)
        fiber = StateSpace(fiber_comps, fiber_w)
        return cls(total, base, fiber, base_idx, fiber_idx, tags=tags)

    @classmethod
    def mobius(cls):
        total = StateSpace([SO2(), RealVector((0.0,), (1.0,))])
        base = StateSpace([SO2()])
        fiber = StateSpace([RealVector((0.0,), (1.0,))])
        return cls(total, base, fiber, [0], [1], twist="mobius")

    # -- projection and lift -------------------------------------------------

    def project(self, x):
        return np.asarray(x, dtype=float)[self.base_idx]

    def project_many(self, X):
        return np.asarray(X, dtype=float)[:, self.base_idx]

    def project_fiber(self, x):
        return np.asarray(x, dtype=float)[self.fiber_idx]

    def lift(self, b, f):
        out = np.empty(self.total.dim)
        out[self.base_idx] = b
        out[self.fiber_idx] = f
        return out

    def lift_many(self, B, F):
        B = np.atleast_2d(B)
        F = np.atleast_2d(F)
        n = max(B.shape[0], F.shape[0])
        out = np.empty((n, self.total.dim))
        out[:, self.base_idx] = B
        out[:, self.fiber_idx] = F
        return out

    # -- interpolation on the total space ------------------------------------

    def _seam_crossed(self, theta_x, theta_y):
        d = wrap_angle(theta_y - theta_x)
        raw = theta_x + d
        return not (-np.pi <= raw < np.pi), d

    def interpolate_total(self, x, y, t):
        if self.twist == "trivial":
            return self.total.interpolate(x, y, t)
        return self.interpolate_total_mobius(x, y, t)

    def interpolate_total_mobius(self, x, y, t):
        """Geodesic on the identified Moebius strip, expressed in the chart.

        The base angle follows the SO2 shortest arc; if that arc crosses the
        chart seam the target fiber coordinate is reflected before linear
        fiber interpolation, and any point past the seam is re-expressed in
        chart coordinates.
        """
        if self.twist != "mobius":
            raise ValueError("mobius interpolation on a trivial bundle")
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"interpolation parameter {t} outside [0,1]")
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        crossed, d = self._seam_crossed(x[0], y[0])
        u_target = 1.0 - y[1] if crossed else y[1]
        raw = x[0] + t * d
        u = x[1] + t * (u_target - x[1])
        if not (-np.pi <= raw < np.pi):
            u = 1.0 - u
        return np.array([wrap_angle(raw), min(max(u, 0.0), 1.0)])


class BundleSequence:
    """Chain of bundles; the base of each level is the total of the previous."""

    def __init__(self, bundles):
        bundles = list(bundles)
        for prev, nxt in zip(bundles, bundles[1:]):
            if nxt.base != prev.total:
                raise ValueError("bundle chain broken: base(k) != total(k-1)")
        self.bundles = bundles

    def __len__(self):
        return len(self.bundles)

    def __iter__(self):
        return iter(self.bundles)

    def __getitem__(self, i):
        return self.bundles[i]

    def spaces(self):
        """Bundle spaces X_1 .. X_K, smallest first."""
        if not self.bundles:
            return []
        out = [self.bundles[0].base]
        out.extend(b.total for b in self.bundles)
        return out


# -- admissibility -----------------------------------------------------------

def _valid_many(phi, X):
    """Evaluate a constraint on rows of X; accepts vectorized objects or plain
    per-state callables."""
    if hasattr(phi, "valid_many"):
        return np.asarray(phi.valid_many(X), dtype=bool)
    return np.fromiter((bool(phi(x)) for x in X), dtype=bool, count=len(X))


def check_admissible(bundle, phi_total, phi_base, n, rng):
    """Count sampled states that are feasible in the total space but whose
    projection the base constraint rejects. Zero for admissible projections."""
    X = bundle.total.sample_uniform_many(rng, n)
    ok_total = _valid_many(phi_total, X)
    ok_base = _valid_many(phi_base, bundle.project_many(X))
    return int(np.sum(ok_total & ~ok_base))


# -- paths -------------------------------------------------------------------

class PathOnSpace:
    """Piecewise-geodesic path, parameterized over [0,1].

    By default the parameter is arc-length fraction. Sections override the
    per-waypoint parameters to realize their own time reparameterization.
    """

    def __init__(self, space, waypoints, params=None, interpolator=None):
        W = np.atleast_2d(np.asarray(waypoints, dtype=float))
        if W.shape[0] < 1 or W.shape[1] != space.dim:
            raise ValueError("path needs >= 1 waypoint on the given space")
        self.space = space
        self.waypoints = W
        self._interp = interpolator if interpolator is not None else space.interpolate
        seg = np.array([space.distance(W[i], W[i + 1])
                        for i in range(W.shape[0] - 1)])
        self._seg_lengths = seg
        self._length = float(seg.sum()) if seg.size else 0.0
        if params is not None:
            params = np.asarray(params, dtype=float)
            if params.shape[0] != W.shape[0]:
                raise ValueError("one parameter per waypoint required")
            if np.any(np.diff(params) < 0) or params[0] != 0.0 or params[-1] != 1.0:
                raise ValueError("parameters must ascend from 0 to 1")
            self.params = params
        elif W.shape[0] == 1:
            self.params = np.array([0.0])
        elif self._length == 0.0:
            self.params = np.linspace(0.0, 1.0, W.shape[0])
        else:
            self.params = np.concatenate([[0.0], np.cumsum(seg)]) / self._length
            self.params[-1] = 1.0

    def length(self):
        return self._length

    @property
    def n_waypoints(self):
        return self.waypoints.shape[0]

    def point_at(self, t):
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"path parameter {t} outside [0,1]")
        W = self.waypoints
        if W.shape[0] == 1:
            return W[0].copy()
        i = int(np.searchsorted(self.params, t, side="right")) - 1
        i = min(max(i, 0), W.shape[0] - 2)
        span = self.params[i + 1] - self.params[i]
        s = 0.0 if span == 0.0 else (t - self.params[i]) / span
        return self._interp(W[i], W[i + 1], min(max(s, 0.0), 1.0))

    def suffix_from(self, first_point, from_index):
        """New path starting at first_point followed by waypoints[from_index:]."""
        W = np.vstack([first_point, self.waypoints[from_index:]])
        return PathOnSpace(self.space, W, interpolator=self._interp)


# -- sections ----------------------------------------------------------------

def _segment_parities(bundle, base_waypoints):
    """Cumulative seam-crossing parity at each base waypoint (Moebius only)."""
    n = base_waypoints.shape[0]
    par = np.zeros(n, dtype=bool)
    for i in range(1, n):
        crossed, _ = bundle._seam_crossed(base_waypoints[i - 1][0],
                                          base_waypoints[i][0])
        par[i] = par[i - 1] ^ crossed
    return par

def _chart_fiber(value, parity):
    return 1.0 - value if parity else value


def _check_section_endpoints(bundle, p_B, x1, x2):
    b = bundle.base
    if b.distance(bundle.project(x1), p_B.waypoints[0]) > SECTION_TOL:
        raise ValueError("section endpoint x1 does not project onto the path start")
    if b.distance(bundle.project(x2), p_B.waypoints[-1]) > SECTION_TOL:
        raise ValueError("section endpoint x2 does not project onto the path end")


def section_l2(bundle, p_B, x1, x2):
    """Section lifting p_B while the fiber part glides geodesically f1 -> f2."""
    _check_section_endpoints(bundle, p_B, x1, x2)
    f1 = bundle.project_fiber(x1)
    f2 = bundle.project_fiber(x2)
    B = p_B.waypoints
    ts = p_B.params
    interp = None
    if bundle.twist == "mobius":
        par = _segment_parities(bundle, B)
        f2_eff = _chart_fiber(f2[0], par[-1])
        vals = f1[0] + ts * (f2_eff - f1[0])
        W = np.array([bundle.lift(B[i], [_chart_fiber(vals[i], par[i])])
                      for i in range(B.shape[0])])
        interp = bundle.interpolate_total_mobius
    else:
        W = np.array([bundle.lift(B[i], bundle.fiber.interpolate(f1, f2, ts[i]))
                      for i in range(B.shape[0])])
    W[0] = x1
    W[-1] = x2
    return PathOnSpace(bundle.total, W, params=ts.copy(), interpolator=interp)


def section_l1(bundle, p_B, x1, x2, flavor):
    """Fiber-first (FF) or fiber-last (FL) section over p_B.

    FF holds the base at p_B(0) while the fiber moves f1 -> f2 during
    t in [0, 1/2], then traverses the base path at fixed fiber; FL is the
    mirror image. When f1 = f2 both degenerate to the lifted base path.
    """
    if flavor not in ("FF", "FL"):
        raise ValueError(f"unknown section flavor {flavor!r}")
    _check_section_endpoints(bundle, p_B, x1, x2)
    f1 = bundle.project_fiber(x1)
    f2 = bundle.project_fiber(x2)
    B = p_B.waypoints
    ts = p_B.params
    mob = bundle.twist == "mobius"
    interp = bundle.interpolate_total_mobius if mob else None
    par = _segment_parities(bundle, B) if mob else np.zeros(B.shape[0], dtype=bool)

    def lift_const(i, f_chart0):
        # lift base waypoint i at constant physical fiber given in start-chart coords
        if mob:
            return bundle.lift(B[i], [_chart_fiber(f_chart0[0], par[i])])
        return bundle.lift(B[i], f_chart0)

    if bundle.fiber.distance(f1, f2) == 0.0:
        W = np.array([lift_const(i, f1) for i in range(B.shape[0])])
        W[0] = x1
        W[-1] = x2
        return PathOnSpace(bundle.total, W, params=ts.copy(), interpolator=interp)

    if B.shape[0] == 1:
        # degenerate base path: pure fiber motion
        return PathOnSpace(bundle.total, np.array([x1, x2]),
                           params=np.array([0.0, 1.0]), interpolator=interp)

    if flavor == "FF":
        f2_start_chart = np.array([_chart_fiber(f2[0], par[-1])]) if mob else f2
        W = [x1, lift_const(0, f2_start_chart)]
        params = [0.0, 0.5]
        for i in range(1, B.shape[0]):
            W.append(lift_const(i, f2_start_chart))
            params.append(0.5 + ts[i] / 2.0)
        W[-1] = x2
    else:
        W = [x1]
        params = [0.0]
        for i in range(1, B.shape[0]):
            W.append(lift_const(i, f1))
            params.append(ts[i] / 2.0)
        W.append(x2)
        params.append(1.0)
    params[-1] = 1.0
    return PathOnSpace(bundle.total, np.array(W), params=np.array(params),
                       interpolator=interp)
