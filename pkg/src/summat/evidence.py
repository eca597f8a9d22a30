"""Finite-sample verdicts about limits.

Limits cannot be decided from finitely many terms, so every numeric verdict
here is three-valued (``holds`` / ``fails`` / ``inconclusive``) and carries the
statistics it was based on.  Sequences are sampled on a geometric grid of
indices; tail behaviour is judged from log-log slopes fitted on two
consecutive windows of the tail.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"
STATUSES = (HOLDS, FAILS, INCONCLUSIVE)


@dataclass(frozen=True)
class Thresholds:
    """Knobs shared by every numeric decision rule.

    tol:
        Values at or below ``tol`` count as zero.
    ratio:
        Growth factor of the geometric probe grid.
    growth_slope:
        A log-log slope at or above this in both tail windows means growth.
    flat_slope:
        Slopes at or below this count as flat.
    decay_slope:
        A log-log slope at or below this in both windows means decay to zero.
    shrink:
        An increasing bounded sequence must have its second-window slope at
        most ``shrink`` times the first (the increments are dying out).
    """

    tol: float = 1e-6
    ratio: float = 1.3
    growth_slope: float = 0.1
    flat_slope: float = 0.01
    decay_slope: float = -0.1
    shrink: float = 0.75

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.ratio > 1:
            raise ValueError("grid ratio must exceed 1")


DEFAULT = Thresholds()


@dataclass
class Evidence:
    """A three-valued verdict and the numbers behind it."""

    status: str
    last: float = math.nan
    sup: float = math.nan
    slope: Optional[float] = None
    window_slopes: tuple = ()
    window: tuple = ()
    witness: Optional[int] = None
    note: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    def to_json(self) -> dict:
        out = asdict(self)
        out["window_slopes"] = [_clean(s) for s in self.window_slopes]
        out["window"] = list(self.window)
        out["last"] = _clean(self.last)
        out["sup"] = _clean(self.sup)
        out["slope"] = _clean(self.slope)
        return out


def _clean(x):
    """JSON-safe float (None for nan/inf), rounded to 12 significant digits."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def geometric_grid(N: int, ratio: float = DEFAULT.ratio, dense: int = 16) -> list[int]:
    """Indices ``0..dense-1`` then a geometric progression, always ending at ``N - 1``."""
    if N < 1:
        raise ValueError("grid size must be >= 1")
    pts = set(range(min(dense, N)))
    x = float(dense)
    while x < N:
        pts.add(int(round(x)))
        x *= ratio
    pts.add(N - 1)
    return sorted(p for p in pts if p < N)


def loglog_slope(ns: Sequence[float], vals: Sequence[float]) -> Optional[float]:
    """Least-squares slope of ``log val`` against ``log n`` over positive pairs."""
    ns = np.asarray(ns, dtype=float)
    vals = np.asarray(vals, dtype=float)
    keep = (ns > 0) & (vals > 0)
    if keep.sum() < 2:
        return None
    x, y = np.log(ns[keep]), np.log(vals[keep])
    if np.ptp(x) == 0:
        return None
    return float(np.polyfit(x, y, 1)[0])


def _tail_windows(ns: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Masks for the tail (``n >= n_max/8``) and its two halves split geometrically."""
    n_max = ns.max()
    tail = ns >= max(n_max / 8.0, 1.0)
    if tail.sum() < 4:
        tail = np.zeros_like(ns, dtype=bool)
        tail[-min(4, len(ns)):] = True
    lo = ns[tail].min()
    mid = math.sqrt(max(lo, 1.0) * n_max)
    first = tail & (ns <= mid)
    second = tail & (ns >= mid)
    return tail, first, second


def _prep(ns, vals):
    ns = np.asarray(ns, dtype=float)
    vals = np.abs(np.asarray(vals, dtype=float))
    order = np.argsort(ns)
    return ns[order], vals[order]


def bounded_verdict(ns, vals, th: Thresholds = DEFAULT) -> Evidence:
    """Is ``sup |vals|`` finite?

    holds: the running sup stops increasing on the tail (slope <= tol), or its
    slope is small (below half of ``th.growth_slope``) and shrinks by the factor
    ``th.shrink`` from the first tail window to the second (a convergent increase).
    fails: both tail windows show slope >= ``th.growth_slope``.
    """
    ns, vals = _prep(ns, vals)
    run = np.maximum.accumulate(vals)
    tail, first, second = _tail_windows(ns)
    s1 = loglog_slope(ns[first], run[first])
    s2 = loglog_slope(ns[second], run[second])
    slope = loglog_slope(ns[tail], vals[tail])
    ev = Evidence(
        status=INCONCLUSIVE, last=float(vals[-1]), sup=float(run[-1]), slope=slope,
        window_slopes=(s1, s2), window=(int(ns[tail].min()), int(ns.max())),
        witness=int(ns[int(np.argmax(vals))]),
    )
    if run[-1] == 0:
        ev.status, ev.note = HOLDS, "identically zero"
        return ev
    if s1 is None or s2 is None:
        ev.note = "tail too short to fit"
        return ev
    if s1 >= th.growth_slope and s2 >= th.growth_slope:
        ev.status, ev.note = FAILS, "running sup grows in both tail windows"
    elif s2 <= th.tol:
        ev.status, ev.note = HOLDS, "running sup constant on the tail"
    elif s2 < th.growth_slope / 2 and s2 <= th.shrink * s1:
        ev.status, ev.note = HOLDS, "running sup levelling off"
    else:
        ev.note = "tail neither clearly bounded nor clearly growing"
    return ev


def decay_verdict(ns, vals, th: Thresholds = DEFAULT) -> Evidence:
    """Does ``|vals| -> 0``?

    Works on the upper envelope ``max_{m >= n} |v_m|`` so that sequences with
    zeros (oscillations) are judged by their peaks.
    holds: the envelope is <= tol on the last tail window, or decays with
    slope <= ``th.decay_slope`` in both windows.
    fails: the envelope stays above tol and its slope is >= ``-th.flat_slope``
    in both windows, or its second-window slope is shallower than
    ``th.decay_slope`` and has shrunk in magnitude by the factor ``th.shrink``
    (``L + c n^-a`` with ``L > 0`` flattens out; ``c n^-a`` keeps its slope).
    """
    ns, vals = _prep(ns, vals)
    env = np.maximum.accumulate(vals[::-1])[::-1]
    tail, first, second = _tail_windows(ns)
    s1 = loglog_slope(ns[first], env[first])
    s2 = loglog_slope(ns[second], env[second])
    slope = loglog_slope(ns[tail], vals[tail])
    ev = Evidence(
        status=INCONCLUSIVE, last=float(vals[-1]), sup=float(env[tail].max()), slope=slope,
        window_slopes=(s1, s2), window=(int(ns[tail].min()), int(ns.max())),
        witness=int(ns[int(np.argmax(vals))]),
    )
    if env[tail].max() <= th.tol:
        ev.status, ev.note = HOLDS, "below tolerance on the whole tail"
    elif env[second].max() <= th.tol:
        ev.status, ev.note = HOLDS, "below tolerance on the last tail window"
    elif s1 is None or s2 is None:
        ev.note = "tail too short to fit"
    elif s1 <= th.decay_slope and s2 <= th.decay_slope:
        ev.status, ev.note = HOLDS, "envelope decays in both tail windows"
    elif env[-1] > th.tol and s1 >= -th.flat_slope and s2 >= -th.flat_slope:
        ev.status, ev.note = FAILS, "envelope does not decrease"
    elif env[-1] > th.tol and s2 > th.decay_slope and s2 >= th.shrink * s1:
        ev.status, ev.note = FAILS, "envelope levels off at a positive value"
    else:
        ev.note = "tail decay too slow to decide"
    return ev


def cauchy_profile(points: np.ndarray, grid: Sequence[int], norm=None) -> tuple[list[int], list[float]]:
    """``c(n) = max_{n <= m <= min(4n, N-1)} |y_m - y_n|`` for grid points ``n <= (N-1)/4``.

    ``points`` holds ``y_0, ..., y_{N-1}`` along its first axis (vectors or
    matrices).  Returns the grid indices used and the profile values.
    """
    if norm is None:
        norm = _supnorm_rows
    N = points.shape[0]
    ns, cs = [], []
    usable = [n for n in grid if 4 * n <= N - 1] or [0]
    for n in usable:
        hi = min(4 * max(n, 1), N - 1)
        diffs = points[n: hi + 1] - points[n]
        cs.append(float(np.max(norm(diffs))) if len(diffs) else 0.0)
        ns.append(n)
    return ns, cs


def _supnorm_rows(diffs: np.ndarray) -> np.ndarray:
    """Sup-norm of vectors, or induced sup-norm of matrices, along axis 0."""
    a = np.abs(diffs)
    if a.ndim == 2:
        return a.max(axis=1)
    return a.sum(axis=2).max(axis=1)


def convergence_verdict(points: np.ndarray, th: Thresholds = DEFAULT, norm=None) -> Evidence:
    """Is the sequence ``points[n]`` Cauchy?  Decay rule applied to the Cauchy profile.

    A profile that is still rising on the tail only shows that the sequence
    has not settled yet, so the decay rule's ``fails`` becomes ``inconclusive``
    there; callers that know the sequence is unbounded can still reject it.
    """
    grid = geometric_grid(points.shape[0], th.ratio)
    ns, cs = cauchy_profile(points, grid, norm)
    ev = decay_verdict(ns, cs, th)
    if ev.status == FAILS and ev.slope is not None and ev.slope >= th.growth_slope:
        ev.status, ev.note = INCONCLUSIVE, "profile still rising on the tail"
    ev.note = "cauchy: " + ev.note
    return ev


def combine(statuses: Sequence[str]) -> str:
    """Conjunction: holds iff all hold, fails if any fails, else inconclusive."""
    statuses = list(statuses)
    if any(s == FAILS for s in statuses):
        return FAILS
    if statuses and all(s == HOLDS for s in statuses):
        return HOLDS
    return INCONCLUSIVE
