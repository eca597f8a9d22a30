"""Distance from a point to the convex hull of finitely many points.

Solves ``min 0.5 * |V^T a - y|^2`` over the probability simplex with the
away-step variant of the conditional-gradient (Frank-Wolfe) method and exact
line search.  Away steps remove weight from bad vertices, which avoids the
zig-zagging of plain Frank-Wolfe when the nearest point lies on a face.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class HullResult:
    distance: float
    weights: np.ndarray
    point: np.ndarray
    gap: float
    iterations: int
    converged: bool


def hull_distance(vertices: np.ndarray, y: np.ndarray, max_iter: int = 500,
                  gap_tol: float = 1e-8) -> HullResult:
    """Euclidean distance from ``y`` to ``conv(vertices)``.

    Parameters
    ----------
    vertices : (K, d) array
        Points spanning the hull.
    y : (d,) array
        Target point.
    max_iter : int
        Iteration cap.
    gap_tol : float
        Stop once the Frank-Wolfe duality gap ``<x - s, x - y>`` drops below this.

    Returns
    -------
    HullResult
        ``point`` is the hull point found, ``weights`` its convex weights.
    """
    V = np.asarray(vertices, dtype=float)
    y = np.asarray(y, dtype=float)
    if V.ndim != 2 or V.shape[0] == 0:
        raise ValueError("need a non-empty (K, d) array of vertices")
    if V.shape[1] != y.shape[0]:
        raise ValueError(f"vertex dimension {V.shape[1]} does not match point dimension {y.shape[0]}")

    start = int(np.argmin(np.sum((V - y) ** 2, axis=1)))
    w = np.zeros(V.shape[0])
    w[start] = 1.0
    x = V[start].copy()
    gap = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        g = x - y
        scores = V @ g
        s = int(np.argmin(scores))
        gap = float(x @ g - scores[s])
        if gap < gap_tol:
            break
        active = np.flatnonzero(w > 0)
        a = int(active[np.argmax(scores[active])])
        away_gap = float(scores[a] - x @ g)
        toward = gap >= away_gap or w[a] >= 1.0
        if toward:
            d, max_step = V[s] - x, 1.0
        else:
            d, max_step = x - V[a], w[a] / (1.0 - w[a])
        dd = float(d @ d)
        if dd == 0.0:
            break
        # exact minimiser of the quadratic along x + t d, clipped to the simplex
        step = min(max_step, -float(g @ d) / dd)
        x = x + step * d
        if toward:
            w *= 1.0 - step
            w[s] += step
        else:
            w *= 1.0 + step
            w[a] -= step
            if step == max_step:
                w[a] = 0.0
    return HullResult(
        distance=float(np.linalg.norm(x - y)), weights=w, point=x,
        gap=max(gap, 0.0), iterations=it, converged=gap < gap_tol,
    )
