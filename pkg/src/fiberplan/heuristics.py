"""Level metrics and level-selection importance functions.

Two metrics on a bundle space: the intrinsic metric (plain total-space
distance) and the quotient-space metric, which routes the base part of
the distance through the base graph. Importance functions score levels
for the planner's priority queue.
"""

from __future__ import annotations

import numpy as np

INTRINSIC = "intrinsic"
QUOTIENT = "quotient"
METRIC_KINDS = (INTRINSIC, QUOTIENT)

UNIFORM = "uniform"
EXPONENTIAL = "exponential"
EPSILON_GREEDY = "greedy"
IMPORTANCE_KINDS = (UNIFORM, EXPONENTIAL, EPSILON_GREEDY)


# -- metrics -----------------------------------------------------------------

def quotient_metric(total_space, bundle, base_graph, x1, x2):
    """Distance combining fiber offset, base offsets to the nearest graph
    vertices, and the shortest graph path between them.

    Falls back to the plain total-space distance when both states snap to
    the same graph vertex. Returns +inf when the graph does not connect
    the two nearest vertices.
    """
    if base_graph.n == 0:
        raise ValueError("quotient metric needs a nonempty base graph")
    b1 = bundle.project(x1)
    b2 = bundle.project(x2)
    V = base_graph.states_view()
    base = bundle.base
    d1 = base.distance_many(V, b1)
    d2 = base.distance_many(V, b2)
    v1 = int(np.argmin(d1))   # argmin takes the lowest id on ties
    v2 = int(np.argmin(d2))
    if v1 == v2:
        return total_space.distance(x1, x2)
    heur = lambda v: base.distance(base_graph.state(v), base_graph.state(v2))
    _, dg = base_graph.shortest_path(v1, v2, heuristic=heur)
    if not np.isfinite(dg):
        return np.inf
    df = bundle.fiber.distance(bundle.project_fiber(x1), bundle.project_fiber(x2))
    return df + float(d1[v1]) + float(d2[v2]) + dg


def quotient_distances_to_vertices(total_space, bundle, base_graph, graph, x):
    """Vectorized quotient distances from every vertex of `graph` to state x.

    Used for nearest-neighbor queries under the quotient metric: one
    single-source Dijkstra from x's nearest base vertex covers all rows.
    """
    V = graph.states_view()
    B = bundle.project_many(V)
    base = bundle.base
    BV = base_graph.states_view()
    b2 = bundle.project(x)
    d2_all = base.distance_many(BV, b2)
    v2 = int(np.argmin(d2_all))
    d2 = float(d2_all[v2])
    dg_all, _ = base_graph.dijkstra(v2)

    # nearest base vertex per graph vertex (N x M distance matrix)
    diff = B[:, None, :] - BV[None, :, :]
    if base._has_angle:
        from .spaces import wrap_angle
        diff[:, :, base._angle] = wrap_angle(diff[:, :, base._angle])
    D = np.sqrt(np.sum((base._wdim[None, None, :] * diff) ** 2, axis=2))
    v1 = np.argmin(D, axis=1)
    d1 = D[np.arange(D.shape[0]), v1]

    F = V[:, bundle.fiber_idx]
    f2 = bundle.project_fiber(x)
    fdiff = f2[None, :] - F
    fiber = bundle.fiber
    if fiber._has_angle:
        from .spaces import wrap_angle
        fdiff[:, fiber._angle] = wrap_angle(fdiff[:, fiber._angle])
    df = np.sqrt(np.sum((fiber._wdim[None, :] * fdiff) ** 2, axis=1))

    out = df + d1 + d2 + dg_all[v1]
    same = v1 == v2
    if np.any(same):
        out[same] = total_space.distance_many(V[same], x)
    return out


# -- importance --------------------------------------------------------------

def epsilon_greedy_weight(k, K, eps):
    """Level weight f(k); weights telescope to 1 over k = 1..K."""
    if not 0.0 < eps < 1.0:
        raise ValueError("epsilon must lie in (0,1)")
    if not 1 <= k <= K:
        raise ValueError(f"level {k} outside 1..{K}")
    if k == 1:
        return eps ** (K - 1)
    return eps ** (K - k) - eps ** (K - k + 1)


def importance(kind, k, n_vertices, d, K, eps=0.1):
    """Score in (0,1] for growing level k next; decreasing in |V_k|."""
    if n_vertices < 0 or d < 1 or not 1 <= k <= K:
        raise ValueError("importance arguments out of range")
    if kind == UNIFORM:
        return 1.0 / (n_vertices + 1.0)
    if kind == EXPONENTIAL:
        return 1.0 / (n_vertices ** (1.0 / d) + 1.0)
    if kind == EPSILON_GREEDY:
        f = epsilon_greedy_weight(k, K, eps)
        return 1.0 / (n_vertices / f + 1.0)
    raise ValueError(f"unknown importance kind {kind!r}")
