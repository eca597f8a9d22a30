"""Matrix means of operator sequences.

For a summation matrix ``A`` and operators ``T_0, T_1, ...`` the ``A``-mean is

    (A T)_n = sum_{i <= n} a[n, i] T_i.

The sequence is ``A``-bounded when these stay bounded in norm, ``A``-ergodic
when ``(A T)_n x`` converges for every ``x``, and ``A``-null when the limit is
0.  Everything here works on finite-dimensional spaces (dense operators) or on
finite truncations of sequence spaces, and every verdict is an
:class:`~summat.evidence.Evidence` record.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import evidence as ev
from .catalog import make_delta
from .core import TriangularMatrix, blockwise_inverse, multiply
from .errors import BudgetError, DimensionError, NonFiniteError, TruncationError
from .evidence import FAILS, HOLDS, INCONCLUSIVE, Evidence, Thresholds
from .pairs import check_star_2C, first_column_vanishes, transfer
from .scalar import EXACT, FLOAT, Field

DEFAULT_BUDGET = 1 << 25
NOT_APPLICABLE = "not-applicable"


def sup_norm(M: np.ndarray) -> float:
    """Operator norm induced by the sup norm: the largest row absolute sum."""
    M = np.asarray(M)
    if M.ndim == 1:
        return float(np.max(np.abs(M.astype(float)))) if M.size else 0.0
    return float(np.max(np.sum(np.abs(M.astype(float)), axis=1)))


def spectral_norm(M: np.ndarray, tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Largest singular value by power iteration on ``M^T M``."""
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        return float(np.linalg.norm(M))
    G = M.T @ M
    v = np.ones(G.shape[0]) / np.sqrt(G.shape[0])
    lam = 0.0
    for _ in range(max_iter):
        w = G @ v
        nrm = np.linalg.norm(w)
        if nrm == 0:
            return 0.0
        new = float(v @ w)
        v = w / nrm
        if abs(new - lam) <= tol * max(1.0, abs(new)):
            lam = new
            break
        lam = new
    return float(np.sqrt(max(lam, 0.0)))


NORMS = {"sup": sup_norm, "euclid": spectral_norm}


class FiniteOperator:
    """A ``d x d`` operator with a memoised power table.

    ``matrix`` may hold floats or :class:`fractions.Fraction` objects; the
    latter keeps every power and mean exact.
    """

    def __init__(self, matrix, name: str = "T", norm_kind: str = "sup",
                 budget: int = DEFAULT_BUDGET):
        arr = np.asarray(matrix)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"operator must be square, got shape {arr.shape}")
        if norm_kind not in NORMS:
            raise ValueError(f"unknown norm {norm_kind!r}")
        if arr.dtype == object:
            self.backend = EXACT
            self.matrix = np.array([[EXACT.coerce(v) for v in r] for r in arr], dtype=object)
        else:
            self.backend = FLOAT
            self.matrix = arr.astype(float)
            if not np.all(np.isfinite(self.matrix)):
                raise NonFiniteError(f"operator {name} has non-finite entries")
        self.name = name
        self.norm_kind = norm_kind
        self.budget = budget
        self._powers = [self.identity()]
        self._lock = threading.Lock()

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def identity(self) -> np.ndarray:
        if self.backend is EXACT:
            out = np.empty((self.dim, self.dim), dtype=object)
            for i in range(self.dim):
                for j in range(self.dim):
                    out[i, j] = Fraction(int(i == j))
            return out
        return np.eye(self.dim)

    def norm(self, M: np.ndarray) -> float:
        return NORMS[self.norm_kind](M)

    def vector_norm(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.max(np.abs(x))) if self.norm_kind == "sup" else float(np.linalg.norm(x))

    def powers(self, n: int) -> np.ndarray:
        """Stack ``T^0, ..., T^(n-1)`` as an ``(n, d, d)`` array."""
        if n * self.dim * self.dim > self.budget:
            raise BudgetError(
                f"{n} powers of a {self.dim}x{self.dim} operator exceed the budget of {self.budget} scalars")
        with self._lock:
            while len(self._powers) < n:
                nxt = self._powers[-1].dot(self.matrix)
                if self.backend is FLOAT and not np.all(np.isfinite(nxt)):
                    raise NonFiniteError(f"power {len(self._powers)} of {self.name} overflows")
                self._powers.append(nxt)
            return np.array(self._powers[:n], dtype=self.matrix.dtype)

    def power(self, i: int) -> np.ndarray:
        return self.powers(i + 1)[i]

    def orbit(self, x: np.ndarray, n: int) -> np.ndarray:
        """``x, Tx, ..., T^(n-1) x`` as rows of an ``(n, d)`` array."""
        x = self._check_vector(x)
        out = np.empty((n, self.dim), dtype=self.matrix.dtype)
        cur = x
        for i in range(n):
            out[i] = cur
            cur = self.matrix.dot(cur)
            if self.backend is FLOAT and not np.all(np.isfinite(cur)):
                raise NonFiniteError(f"orbit of {self.name} overflows at step {i + 1}")
        return out

    def _check_vector(self, x) -> np.ndarray:
        x = np.asarray(x)
        if x.shape != (self.dim,):
            raise DimensionError(
                f"probe of shape {x.shape} does not match operator dimension {self.dim}")
        if self.backend is EXACT:
            return np.array([EXACT.coerce(v) for v in x], dtype=object)
        return x.astype(float)


# -- operator families -------------------------------------------------------


class PowerFamily:
    """``T_i = T^i``."""

    kind = "power"

    def __init__(self, T: FiniteOperator):
        self.T = T
        self.dim = T.dim

    def combine(self, coeffs: np.ndarray) -> np.ndarray:
        n = len(coeffs)
        P = self.T.powers(n)
        return np.tensordot(np.asarray(coeffs, dtype=P.dtype), P, axes=1)

    def apply(self, element: np.ndarray, x: np.ndarray) -> np.ndarray:
        return element.dot(self.T._check_vector(x))

    def norm(self, element: np.ndarray) -> float:
        return self.T.norm(element)


class _ExpansionFamily:
    """Members ``T_m = sum_i d[m, i] E_i`` for ``D = A^{-1}`` and fixed building blocks ``E_i``.

    A linear combination of members is stored by its coefficient vector over
    the ``E_i``; only coefficients with ``i < dim`` act on the truncation.
    """

    kind = "expansion"

    def __init__(self, A: TriangularMatrix, dim: int):
        if dim < 1:
            raise ValueError("truncation dimension must be >= 1")
        self.A = A
        self.dim = dim
        self.D = A.closed_inverse if A.has_closed_inverse else blockwise_inverse(A)

    def member(self, m: int) -> np.ndarray:
        return np.asarray(self.D.row(m), dtype=float)

    def combine(self, coeffs: np.ndarray) -> np.ndarray:
        """Coefficients of ``sum_m coeffs[m] T_m``."""
        n = len(coeffs) - 1
        if n >= self.dim:
            raise TruncationError(
                f"row {n} needs {n + 1} building blocks but the truncation has {self.dim} coordinates")
        acc = np.zeros(n + 1)
        for m, b in enumerate(np.asarray(coeffs, dtype=float)):
            if b != 0:
                acc[: m + 1] += b * self.member(m)
        return acc


class ShiftFamily(_ExpansionFamily):
    """``(A^{-1} S)_m = sum_i d[m, i] S^i`` with ``S`` the backward shift on ``R^dim``.

    The truncated shift feeds 0 into the last coordinate, so it is nilpotent;
    results describe the untruncated operator only while the row index stays
    below ``dim``.
    """

    kind = "shift"

    def apply(self, coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionError(f"probe of shape {x.shape} does not match truncation {self.dim}")
        out = np.zeros(self.dim)
        for i, c in enumerate(coeffs[: self.dim]):
            if c != 0:
                out[: self.dim - i] += c * x[i:]
        return out

    def matrix(self, coeffs: np.ndarray) -> np.ndarray:
        M = np.zeros((self.dim, self.dim))
        for i, c in enumerate(coeffs[: self.dim]):
            M += c * np.eye(self.dim, k=i)
        return M

    def norm(self, coeffs: np.ndarray) -> float:
        """Sup-norm operator norm: the top row of the Toeplitz matrix is the widest."""
        return float(np.sum(np.abs(coeffs[: self.dim])))


class CoordinateFamily(_ExpansionFamily):
    """``(A^{-1} E)_m = sum_i d[m, i] E_i`` with ``E_i x = x_i e_i`` on ``R^dim``.

    Every combination is a diagonal operator.
    """

    kind = "coordinate"

    def apply(self, coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionError(f"probe of shape {x.shape} does not match truncation {self.dim}")
        out = np.zeros(self.dim)
        k = min(len(coeffs), self.dim)
        out[:k] = coeffs[:k] * x[:k]
        return out

    def matrix(self, coeffs: np.ndarray) -> np.ndarray:
        d = np.zeros(self.dim)
        k = min(len(coeffs), self.dim)
        d[:k] = coeffs[:k]
        return np.diag(d)

    def norm(self, coeffs: np.ndarray) -> float:
        """Norm of a diagonal operator: its largest diagonal magnitude."""
        return float(np.max(np.abs(coeffs[: self.dim]))) if len(coeffs) else 0.0


def _family(family) -> PowerFamily:
    if isinstance(family, FiniteOperator):
        return PowerFamily(family)
    return family


def expected_value(A: TriangularMatrix, family, n: int):
    """``(A T)_n = sum_{i <= n} a[n, i] T_i`` (an operator, in the family's representation)."""
    fam = _family(family)
    return fam.combine(A.row(n))


def expected_value_at(A: TriangularMatrix, family, x: np.ndarray, n: int) -> np.ndarray:
    """``(A T)_n x``."""
    fam = _family(family)
    if isinstance(fam, PowerFamily):
        orbit = fam.T.orbit(x, n + 1)
        return np.asarray(A.row(n), dtype=orbit.dtype).dot(orbit)
    return fam.apply(fam.combine(A.row(n)), x)


# -- trajectories ------------------------------------------------------------


@dataclass
class Trajectory:
    """``(A T)_n x`` for ``n < N`` plus norms and successive-difference norms."""

    matrix_id: str
    operator_id: str
    points: np.ndarray
    norms: np.ndarray
    diffs: np.ndarray

    def to_csv(self) -> str:
        lines = ["n,norm,diff_norm"]
        for n in range(len(self.norms)):
            diff = "" if n == 0 else repr(float(self.diffs[n - 1]))
            lines.append(f"{n},{float(self.norms[n])!r},{diff}")
        return "\n".join(lines) + "\n"


def mean_rows(A: TriangularMatrix, N: int, dtype=float) -> np.ndarray:
    """Dense ``N x N`` block of ``A`` (lower triangle) with the requested dtype."""
    out = np.zeros((N, N), dtype=dtype)
    if dtype == object:
        out.fill(Fraction(0))
    for n in range(N):
        out[n, : n + 1] = A.row(n)
    return out


def trajectory(A: TriangularMatrix, T: FiniteOperator, x: np.ndarray, N: int) -> Trajectory:
    """All means ``(A T)_n x`` for ``n < N`` from one orbit ``x, Tx, ..., T^(N-1) x``."""
    orbit = T.orbit(x, N)
    block = mean_rows(A, N, orbit.dtype)
    pts = block.dot(orbit)
    fpts = pts.astype(float)
    norms = np.array([T.vector_norm(p) for p in fpts])
    diffs = np.array([T.vector_norm(d) for d in np.diff(fpts, axis=0)])
    return Trajectory(A.name, T.name, pts, norms, diffs)


def operator_means(A: TriangularMatrix, T: FiniteOperator, N: int) -> np.ndarray:
    """Stack of ``(A T)_n`` for ``n < N`` as an ``(N, d, d)`` array."""
    P = T.powers(N)
    block = mean_rows(A, N, P.dtype)
    return np.tensordot(block, P, axes=1)


# -- classification ----------------------------------------------------------


@dataclass
class ErgodicVerdict:
    bounded: Evidence
    ergodic: Evidence
    null: Evidence
    delta_A_null: Evidence
    A_delta_null: Evidence
    limit_T_invariant: Evidence
    limit: Optional[np.ndarray] = None
    limit_T_invariant_all: Optional[Evidence] = None
    first_column: Optional[object] = None
    probes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "bounded": self.bounded.to_json(),
            "ergodic": self.ergodic.to_json(),
            "null": self.null.to_json(),
            "delta_A_null": self.delta_A_null.to_json(),
            "A_delta_null": self.A_delta_null.to_json(),
            "limit_T_invariant": self.limit_T_invariant.to_json(),
            "limit": None if self.limit is None else [[ev._clean(v) for v in r] for r in self.limit],
        }
        if self.limit_T_invariant_all is not None:
            out["limit_T_invariant_all_x"] = self.limit_T_invariant_all.to_json()
        if self.first_column is not None:
            out["first_column_vanishes"] = self.first_column.to_json()
        return out


def _combine_evidence(items: Sequence[Evidence], label: str) -> Evidence:
    status = ev.combine([e.status for e in items])
    worst = max(items, key=lambda e: (e.sup if np.isfinite(e.sup) else -1.0))
    out = Evidence(status=status, last=worst.last, sup=worst.sup, slope=worst.slope,
                   window_slopes=worst.window_slopes, window=worst.window,
                   witness=worst.witness, note=f"{label}: " + "; ".join(e.note for e in items))
    out.extra["per_probe"] = [e.status for e in items]
    return out


def _grid_values(grid, seq):
    return [float(seq[n]) for n in grid]


def classify(A: TriangularMatrix, T: FiniteOperator, probes: Sequence, N: int = 512,
             tol: Optional[float] = None, thresholds: Optional[Thresholds] = None) -> ErgodicVerdict:
    """Empirical ``A``-bounded / ``A``-ergodic / ``A``-null verdicts for the powers of ``T``.

    Also reports: ``delta_A_null`` (successive means differ by less and less),
    ``A_delta_null`` (the means of ``A Delta`` vanish; ``lim a[n,0] = 0`` is
    reported alongside), and ``limit_T_invariant`` (``(T - I)(A T)_n x -> 0`` and
    ``(A T)_n (T - I) x -> 0``) on the probes, plus the same residual in
    operator norm as ``limit_T_invariant_all``.
    """
    if not probes:
        raise ValueError("need at least one probe vector")
    th = _th(tol, thresholds)
    grid = list(range(N))
    means = operator_means(A, T, N)
    fmeans = means.astype(float)
    op_norms = np.array([T.norm(M) for M in fmeans])
    bounded = ev.bounded_verdict(grid, _grid_values(grid, op_norms), th)

    I = T.identity().astype(float)
    Tm = T.matrix.astype(float)
    AD = multiply(A, make_delta(A.backend))
    ad_means = operator_means(AD, T, N).astype(float)

    ergs, nulls, dnulls, adnulls, invs, trajs = [], [], [], [], [], []
    for x in probes:
        tr = trajectory(A, T, np.asarray(x), N)
        trajs.append(tr)
        pts = tr.points.astype(float)
        e = ev.convergence_verdict(pts, th, norm=lambda d: np.array([T.vector_norm(v) for v in d]))
        if e.status == INCONCLUSIVE and ev.bounded_verdict(grid, _grid_values(grid, tr.norms), th).fails:
            e.status, e.note = FAILS, e.note + "; the means grow without bound"
        ergs.append(e)
        nulls.append(ev.decay_verdict(grid, _grid_values(grid, tr.norms), th))
        dgrid = [n for n in grid if n < N - 1]
        dnulls.append(ev.decay_verdict(dgrid, _grid_values(dgrid, tr.diffs), th))
        xf = np.asarray(x, dtype=float)
        adn = [T.vector_norm(ad_means[n] @ xf) for n in range(N)]
        adnulls.append(ev.decay_verdict(grid, _grid_values(grid, adn), th))
        left = [(Tm - I) @ p for p in pts]
        right = fmeans @ ((Tm - I) @ xf)
        res = [max(T.vector_norm(l), T.vector_norm(r)) for l, r in zip(left, right)]
        invs.append(ev.decay_verdict(grid, _grid_values(grid, res), th))

    ergodic = _combine_evidence(ergs, "cauchy tail")
    null = _combine_evidence(nulls, "norm of mean")
    limit = fmeans[-1]
    if null.holds:
        ergodic.status = HOLDS
        ergodic.note += "; null implies ergodic with limit 0"
        limit = np.zeros_like(limit)
    inv_all = [T.norm((Tm - I) @ M) for M in fmeans]
    return ErgodicVerdict(
        bounded=bounded,
        ergodic=ergodic,
        null=null,
        delta_A_null=_combine_evidence(dnulls, "successive differences"),
        A_delta_null=_combine_evidence(adnulls, "means of A*delta"),
        limit_T_invariant=_combine_evidence(invs, "(T-I) residual"),
        limit=limit,
        limit_T_invariant_all=ev.decay_verdict(grid, _grid_values(grid, inv_all), th),
        first_column=first_column_vanishes(A, max(N, 16), th.tol),
        probes=trajs,
    )


def _th(tol, thresholds) -> Thresholds:
    th = thresholds or ev.DEFAULT
    if tol is not None and tol != th.tol:
        th = Thresholds(**{**th.__dict__, "tol": tol})
    return th


def delta_null_via_difference_matrix(A: TriangularMatrix, T: FiniteOperator, x, N: int,
                                     tol: Optional[float] = None) -> Evidence:
    """Null verdict of the matrix ``Delta A`` on the same operator and probe."""
    th = _th(tol, None)
    DA = multiply(make_delta(A.backend), A)
    tr = trajectory(DA, T, np.asarray(x), N)
    # row n + 1 of delta*A gives the n-th successive difference; index it the
    # same way as classify() so that both paths judge identical data
    grid = list(range(N - 1))
    return ev.decay_verdict(grid, [float(tr.norms[n + 1]) for n in grid], th)


def absolutely_bounded_check(A: TriangularMatrix, T: FiniteOperator, N: int = 512,
                             D: Optional[TriangularMatrix] = None,
                             tol: Optional[float] = None) -> Evidence:
    """Boundedness of ``sum_i |a[n,i]| |T^i|`` (of ``|d[n,i] a[n,i]|`` with a Schur multiplier ``D``)."""
    th = _th(tol, None)
    P = T.powers(N).astype(float)
    pn = np.array([T.norm(M) for M in P])
    grid = ev.geometric_grid(N, th.ratio)
    vals = []
    for n in grid:
        a = np.abs(np.asarray(A.row(n), dtype=float))
        if D is not None:
            a = a * np.abs(np.asarray(D.row(n), dtype=float))
        vals.append(float(a @ pn[: n + 1]))
    e = ev.bounded_verdict(grid, vals, th)
    e.extra["power_norm_sup"] = float(pn.max())
    return e


@dataclass
class EberleinResult:
    limit_exists: Evidence
    y: Optional[np.ndarray]
    fixed_point_residual: Optional[float]
    hull_distance: Optional[float]
    hull_gap: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "limit_exists": self.limit_exists.to_json(),
            "y": None if self.y is None else [ev._clean(v) for v in self.y],
            "fixed_point_residual": ev._clean(self.fixed_point_residual),
            "hull_distance": ev._clean(self.hull_distance),
            "hull_gap": ev._clean(self.hull_gap),
        }


def eberlein_check(A: TriangularMatrix, T: FiniteOperator, x0, N: int = 512,
                   tol: Optional[float] = None) -> EberleinResult:
    """Limit ``y`` of ``(A T)_n x0``, the residual ``|T y - y|`` and the distance
    from ``y`` to ``conv{T^k x0 : k < N}``."""
    from .hull import hull_distance

    th = _th(tol, None)
    tr = trajectory(A, T, np.asarray(x0), N)
    pts = tr.points.astype(float)
    conv = ev.convergence_verdict(pts, th, norm=lambda d: np.array([T.vector_norm(v) for v in d]))
    if not conv.holds:
        grid = ev.geometric_grid(N, th.ratio)
        conv.extra["growth"] = ev.bounded_verdict(grid, _grid_values(grid, tr.norms), th).to_json()
        return EberleinResult(conv, None, None, None)
    grid = ev.geometric_grid(N, th.ratio)
    null = ev.decay_verdict(grid, _grid_values(grid, tr.norms), th)
    y = np.zeros(T.dim) if null.holds else pts[-1]
    Tm = T.matrix.astype(float)
    residual = T.vector_norm(Tm @ y - y)
    orbit = T.orbit(np.asarray(x0), N).astype(float)
    hull = hull_distance(orbit, y)
    return EberleinResult(conv, y, residual, hull.distance, hull.gap)


# -- sequence-space families -------------------------------------------------


@dataclass
class FamilyVerdict:
    evidence: Evidence
    rows: list
    norms: list
    witness_values: list = field(default_factory=list)
    row_abs_sums: list = field(default_factory=list)
    probes: dict = field(default_factory=dict)
    caveat: str = ""

    @property
    def status(self) -> str:
        return self.evidence.status

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "evidence": self.evidence.to_json(),
            "rows": list(self.rows),
            "norms": [ev._clean(v) for v in self.norms],
            "caveat": self.caveat,
            "probes": {k: v.to_json() for k, v in self.probes.items()},
        }


def _family_rows(N: int, dim: int, th: Thresholds) -> list[int]:
    if N > dim:
        raise TruncationError(f"rows up to {N - 1} need a truncation of at least {N} coordinates, got {dim}")
    return ev.geometric_grid(N, th.ratio)


def shift_family_test(A: TriangularMatrix, B: TriangularMatrix, N_dim: int, N: int,
                      mode: str = "bounded", tol: Optional[float] = None) -> FamilyVerdict:
    """``B``-means of ``(A^{-1} S)_n`` on a truncated l-infinity.

    ``mode='bounded'`` tests bounded norms, ``mode='null'`` tests decay.  The
    norm of each mean is cross-checked by evaluating it on the sign witness of
    its top row.
    """
    if mode not in ("bounded", "null"):
        raise ValueError(f"mode must be 'bounded' or 'null', got {mode!r}")
    th = _th(tol, None)
    fam = ShiftFamily(A, N_dim)
    rows = _family_rows(N, N_dim, th)
    norms, witness = [], []
    for n in rows:
        coeffs = fam.combine(np.asarray(B.row(n), dtype=float))
        norms.append(fam.norm(coeffs))
        z = np.zeros(N_dim)
        z[: len(coeffs)] = np.sign(coeffs)
        witness.append(float(fam.apply(coeffs, z)[0]))
    rule = ev.bounded_verdict if mode == "bounded" else ev.decay_verdict
    return FamilyVerdict(
        rule(rows, norms, th), rows, norms, witness_values=witness,
        caveat=f"truncated to {N_dim} coordinates; the truncated shift is nilpotent, "
               f"so only rows n < {N_dim} are meaningful and were probed",
    )


def coordinate_family_test(A: TriangularMatrix, B: TriangularMatrix, N_dim: int, N: int,
                           tol: Optional[float] = None,
                           probes: Optional[dict] = None) -> FamilyVerdict:
    """``B``-means of ``(A^{-1} E)_n`` on a truncated c0: do they vanish on each probe?

    Default probes: ``e_0``, ``e_1``, ``x_i = 1/(i+1)`` and ``x_i = 1/sqrt(i+1)``.
    The verdict is the conjunction over probes.  ``norms`` holds the true
    operator norms ``max_i |c[n,i]|`` and ``row_abs_sums`` the row sums of ``C``.
    """
    th = _th(tol, None)
    fam = CoordinateFamily(A, N_dim)
    rows = _family_rows(N, N_dim, th)
    idx = np.arange(N_dim, dtype=float)
    if probes is None:
        e0, e1 = np.zeros(N_dim), np.zeros(N_dim)
        e0[0] = 1.0
        e1[min(1, N_dim - 1)] = 1.0
        probes = {"e0": e0, "e1": e1, "harmonic": 1.0 / (idx + 1.0), "inv-sqrt": 1.0 / np.sqrt(idx + 1.0)}
    norms, sums = [], []
    values = {k: [] for k in probes}
    for n in rows:
        coeffs = fam.combine(np.asarray(B.row(n), dtype=float))
        norms.append(fam.norm(coeffs))
        sums.append(float(np.sum(np.abs(coeffs))))
        for k, x in probes.items():
            values[k].append(float(np.max(np.abs(fam.apply(coeffs, x)))))
    per_probe = {k: ev.decay_verdict(rows, v, th) for k, v in values.items()}
    overall = _combine_evidence(list(per_probe.values()), "coordinate means")
    return FamilyVerdict(
        overall, rows, norms, row_abs_sums=sums, probes=per_probe,
        caveat=f"truncated to {N_dim} coordinates; probes are finite sections of c0 vectors",
    )


@dataclass
class InvariantTransferResult:
    status: str
    applicable: bool
    bound_holds: bool
    K_C: float
    pair_verdict: str
    residuals_A: Evidence
    residuals_B: Evidence
    max_excess: float

    def to_json(self) -> dict:
        return {
            "status": self.status, "applicable": self.applicable,
            "bound_holds": self.bound_holds, "K_C": ev._clean(self.K_C),
            "pair_verdict": self.pair_verdict, "residuals_A": self.residuals_A.to_json(),
            "residuals_B": self.residuals_B.to_json(), "max_excess": ev._clean(self.max_excess),
        }


def limit_invariant_transfer_probe(A: TriangularMatrix, B: TriangularMatrix, T: FiniteOperator,
                                   x, N: int = 512, tol: Optional[float] = None,
                                   pair_status: Optional[str] = None) -> InvariantTransferResult:
    """Check ``r_B(n) <= K_C max_{j <= n} r_A(j) + tol`` with ``r_M(n) = |(T - I)(M T)_n x|``.

    ``K_C`` is the largest row absolute sum of ``C = B A^{-1}`` over rows below
    ``N``.  The probe only applies when ``(A, B)`` has ``*2C`` and the
    ``A``-residuals vanish; otherwise the status is ``not-applicable``.
    """
    th = _th(tol, None)
    if A is B:
        # C = I solves CA = B even when A is singular
        K = 1.0
        pair_status = HOLDS
    else:
        tm = transfer(A, B)
        if pair_status is None:
            pair_status = check_star_2C(tm, max(N, 16), th.tol).status
        K = max(float(np.sum(np.abs(np.asarray(tm.C.row(n), dtype=float)))) for n in range(N))
    Tm = T.matrix.astype(float)
    I = np.eye(T.dim)
    ra = np.array([T.vector_norm((Tm - I) @ p) for p in trajectory(A, T, x, N).points.astype(float)])
    rb = np.array([T.vector_norm((Tm - I) @ p) for p in trajectory(B, T, x, N).points.astype(float)])
    bound = K * np.maximum.accumulate(ra) + th.tol
    excess = float(np.max(rb - bound))
    grid = ev.geometric_grid(N, th.ratio)
    ea = ev.decay_verdict(grid, _grid_values(grid, ra), th)
    eb = ev.decay_verdict(grid, _grid_values(grid, rb), th)
    applicable = pair_status == HOLDS and ea.holds
    bound_holds = excess <= 0
    if not applicable:
        status = NOT_APPLICABLE
    elif bound_holds and eb.holds:
        status = HOLDS
    elif not bound_holds or eb.fails:
        status = FAILS
    else:
        status = INCONCLUSIVE
    return InvariantTransferResult(status, applicable, bound_holds, K, pair_status, ea, eb, excess)
