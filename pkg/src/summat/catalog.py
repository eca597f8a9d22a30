"""Summation matrices used throughout the package.

All weighted means share one shape: with positive weights ``w(1), w(2), ...``
and partial sums ``S(n) = w(1) + ... + w(n)``, row ``n`` (0-based) is

    a[n, k] = w(k + 1) / S(n + 1),   0 <= k <= n,

and the inverse is bidiagonal with ``S(n+1)/w(n+1)`` on the diagonal and
``-S(n)/w(n+1)`` just below it.  Families whose weights grow exponentially
keep weights and partial sums as logarithms and only exponentiate ratios.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Union

import numpy as np

from .core import TriangularMatrix, identity_like
from .scalar import EXACT, FLOAT, Field, LogPositive

__all__ = [
    "PowerWeightSpec", "ExpWeightSpec", "FunctionWeightSpec", "PartialSumTable",
    "partial_sum", "partial_sum_table", "asymptotic_class", "AsymptoticClass",
    "make_identity", "make_cesaro", "make_delta", "make_delta_inverse",
    "make_power_weighted", "make_exp_weighted", "make_function_weighted",
    "make_weighted_mean", "make_counterexample_matrix", "make_be_function_weight",
    "adaptive_simpson", "integrate_weight",
]


@dataclass(frozen=True)
class PowerWeightSpec:
    """Weights ``w(i) = i**p``."""

    p: float

    def __post_init__(self):
        if not math.isfinite(self.p):
            raise ValueError(f"exponent must be finite, got {self.p!r}")

    log_domain = False

    @property
    def is_integer(self) -> bool:
        return float(self.p).is_integer()

    @property
    def tag(self) -> tuple:
        return ("Mp", float(self.p))

    @property
    def label(self) -> str:
        return f"M{_fmt_p(self.p)}"

    def weights(self, i: np.ndarray) -> np.ndarray:
        return np.asarray(i, dtype=float) ** float(self.p)

    def exact_weight(self, i: int) -> Fraction:
        if not self.is_integer:
            raise ValueError(f"exact weights need an integer exponent, got p={self.p}")
        return Fraction(i) ** int(self.p)

    def log_weights(self, i: np.ndarray) -> np.ndarray:
        return float(self.p) * np.log(np.asarray(i, dtype=float))


@dataclass(frozen=True)
class ExpWeightSpec:
    """Weights ``w(i) = e**i``."""

    log_domain = True
    tag = ("Mexp",)
    label = "Mexp"

    def log_weights(self, i: np.ndarray) -> np.ndarray:
        return np.asarray(i, dtype=float)


@dataclass(frozen=True)
class FunctionWeightSpec:
    """Weights ``w(i) = f(i)`` for a continuous positive ``f`` given by ``log f``.

    ``log_f`` must accept a float array.  Equality and hashing use ``name``
    only, so two specs with the same name must describe the same function.
    """

    log_f: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    name: str = "f"

    log_domain = True

    @property
    def tag(self) -> tuple:
        return ("Mf", self.name)

    @property
    def label(self) -> str:
        return f"Mf:{self.name}"

    def log_weights(self, i: np.ndarray) -> np.ndarray:
        out = np.asarray(self.log_f(np.asarray(i, dtype=float)), dtype=float)
        if not np.all(np.isfinite(out)):
            raise ValueError(f"log_f of {self.name} is not finite on the requested points")
        return out


WeightSpec = Union[PowerWeightSpec, ExpWeightSpec, FunctionWeightSpec]


def _fmt_p(p: float) -> str:
    p = float(p)
    return str(int(p)) if p.is_integer() else repr(p)


class PartialSumTable:
    """Memoised ``S(1), S(2), ...`` for one weight family and backend.

    The table grows in chunks under a lock; readers only ever see fully
    written prefixes.  Log-domain families store ``log S(n)``.
    """

    def __init__(self, spec: WeightSpec, backend: Field = FLOAT):
        if backend is EXACT and (spec.log_domain or not spec.is_integer):
            raise ValueError(f"{spec.label} has irrational weights; use the float backend")
        self.spec = spec
        self.backend = backend
        self._lock = threading.Lock()
        self._exact: list[Fraction] = []
        self._vals = np.zeros(0)

    def __len__(self) -> int:
        return len(self._exact) if self.backend is EXACT else len(self._vals)

    def _grow(self, n: int) -> None:
        with self._lock:
            have = len(self)
            if n <= have:
                return
            target = max(n, 2 * have, 64)
            if self.backend is EXACT:
                total = self._exact[-1] if self._exact else Fraction(0)
                for i in range(have + 1, target + 1):
                    total += self.spec.exact_weight(i)
                    self._exact.append(total)
                return
            i = np.arange(have + 1, target + 1, dtype=float)
            if self.spec.log_domain:
                lw = self.spec.log_weights(i)
                if have:
                    lw[0] = np.logaddexp(self._vals[-1], lw[0])
                new = np.logaddexp.accumulate(lw)
            else:
                w = self.spec.weights(i)
                if have:
                    w[0] += self._vals[-1]
                new = np.cumsum(w)
            self._vals = np.concatenate([self._vals, new])

    def value(self, n: int):
        """``S(n)``: Fraction, float, or :class:`LogPositive` for log families."""
        if n < 1:
            raise ValueError(f"partial sums start at n=1, got {n}")
        self._grow(n)
        if self.backend is EXACT:
            return self._exact[n - 1]
        v = float(self._vals[n - 1])
        return LogPositive(v) if self.spec.log_domain else v

    def log(self, n: int) -> float:
        if n < 1:
            raise ValueError(f"partial sums start at n=1, got {n}")
        self._grow(n)
        if self.backend is EXACT:
            return math.log(self._exact[n - 1])
        v = float(self._vals[n - 1])
        return v if self.spec.log_domain else math.log(v)

    def prefix(self, n: int) -> np.ndarray:
        """Float array ``S(1..n)`` (as logs for log-domain families)."""
        self._grow(n)
        if self.backend is EXACT:
            return np.array([float(s) for s in self._exact[:n]])
        return self._vals[:n]


_TABLES: dict = {}
_TABLES_LOCK = threading.Lock()


def partial_sum_table(spec: WeightSpec, backend: Field = FLOAT) -> PartialSumTable:
    key = (spec, backend.name)
    with _TABLES_LOCK:
        table = _TABLES.get(key)
        if table is None:
            table = _TABLES[key] = PartialSumTable(spec, backend)
    return table


def partial_sum(spec: WeightSpec, n: int, backend: Field = FLOAT):
    """``S(n) = w(1) + ... + w(n)`` for the given weight family."""
    return partial_sum_table(spec, backend).value(n)


class AsymptoticClass(NamedTuple):
    """Growth of ``S(n, p)``: ``constant``, ``log`` (like log n) or ``power`` (like n**exponent)."""

    kind: str
    exponent: float = 0.0


def asymptotic_class(p: float) -> AsymptoticClass:
    if not math.isfinite(p):
        raise ValueError(f"exponent must be finite, got {p!r}")
    if p < -1:
        return AsymptoticClass("constant")
    if p == -1:
        return AsymptoticClass("log")
    return AsymptoticClass("power", p + 1.0)


# -- constructors ------------------------------------------------------------


def make_identity(backend: Field = FLOAT) -> TriangularMatrix:
    return identity_like(backend)


def make_delta(backend: Field = FLOAT) -> TriangularMatrix:
    """Difference matrix: 1 on the diagonal, -1 just below it."""
    one = backend.one

    def row(n):
        r = backend.zeros(n + 1)
        r[n] = one
        if n:
            r[n - 1] = -one
        return r

    return TriangularMatrix(
        row=row, backend=backend, name="delta", family=("delta",),
        is_probability=False, diagonal_nonzero=True, bandwidth=1,
        closed_inverse=lambda: make_delta_inverse(backend),
    )


def make_delta_inverse(backend: Field = FLOAT) -> TriangularMatrix:
    """Summation matrix: every entry on or below the diagonal is 1."""

    def row(n):
        r = backend.zeros(n + 1)
        r[:] = backend.one
        return r

    return TriangularMatrix(
        row=row, backend=backend, name="delta-inv", family=("delta-inv",),
        is_probability=False, diagonal_nonzero=True,
        closed_inverse=lambda: make_delta(backend),
    )


def make_weighted_mean(spec: WeightSpec, backend: Field = FLOAT,
                       name: str | None = None) -> TriangularMatrix:
    """Weighted mean ``a[n,k] = w(k+1)/S(n+1)`` with its bidiagonal inverse attached."""
    table = partial_sum_table(spec, backend)
    note = "1-based weights shifted: a[n,k] = w(k+1)/S(n+1)"

    if backend is EXACT:
        weights: dict[int, Fraction] = {}

        def w(i):
            if i not in weights:
                weights[i] = spec.exact_weight(i)
            return weights[i]

        def row(n):
            s = table.value(n + 1)
            return backend.array([w(i) / s for i in range(1, n + 2)])

        def inv_row(n):
            r = backend.zeros(n + 1)
            wn = w(n + 1)
            r[n] = table.value(n + 1) / wn
            if n:
                r[n - 1] = -table.value(n) / wn
            return r

    elif spec.log_domain:

        def row(n):
            i = np.arange(1, n + 2, dtype=float)
            return np.exp(spec.log_weights(i) - table.log(n + 1))

        def inv_row(n):
            r = np.zeros(n + 1)
            lw = float(spec.log_weights(np.array([n + 1.0]))[0])
            r[n] = math.exp(table.log(n + 1) - lw)
            if n:
                r[n - 1] = -math.exp(table.log(n) - lw)
            return r

    else:

        def row(n):
            i = np.arange(1, n + 2, dtype=float)
            return spec.weights(i) / table.value(n + 1)

        def inv_row(n):
            r = np.zeros(n + 1)
            wn = float(spec.weights(np.array([n + 1.0]))[0])
            r[n] = table.value(n + 1) / wn
            if n:
                r[n - 1] = -table.value(n) / wn
            return r

    label = name or spec.label

    def inverse():
        return TriangularMatrix(
            row=inv_row, backend=backend, name=f"inv({label})",
            family=("inverse", spec.tag), diagonal_nonzero=True, bandwidth=1,
            index_base_note=note,
        )

    return TriangularMatrix(
        row=row, backend=backend, name=label, family=spec.tag,
        is_probability=True, diagonal_nonzero=True, closed_inverse=inverse,
        index_base_note=note,
    )


def make_power_weighted(spec: PowerWeightSpec | float, backend: Field = FLOAT) -> TriangularMatrix:
    """``M_p``: entries ``(k+1)**p / S(n+1, p)``.  Exact backend needs integer ``p``."""
    if not isinstance(spec, PowerWeightSpec):
        spec = PowerWeightSpec(float(spec))
    if backend is EXACT and not spec.is_integer:
        raise ValueError(f"exact backend requires an integer exponent, got p={spec.p}")
    return make_weighted_mean(spec, backend)


def make_cesaro(backend: Field = FLOAT) -> TriangularMatrix:
    """Cesàro means: ``1/(n+1)`` on and below the diagonal (the case p = 0)."""
    return make_weighted_mean(PowerWeightSpec(0.0), backend, name="cesaro")


def make_exp_weighted() -> TriangularMatrix:
    """``M_exp``: weights ``e**i``, evaluated through logarithms."""
    return make_weighted_mean(ExpWeightSpec())


def make_function_weighted(spec: FunctionWeightSpec) -> TriangularMatrix:
    return make_weighted_mean(spec)


def make_counterexample_matrix(backend: Field = FLOAT) -> TriangularMatrix:
    """Probability matrix supported on even columns.

    Rows ``2m`` and ``2m + 1`` both put mass ``1/(m+1)`` on columns
    ``0, 2, ..., 2m``; odd columns vanish, so odd rows have a zero diagonal.
    """

    def row(n):
        m = n // 2
        r = backend.zeros(n + 1)
        r[0: 2 * m + 1: 2] = backend.one / (m + 1)
        return r

    return TriangularMatrix(
        row=row, backend=backend, name="counterexample", family=("counterexample",),
        is_probability=True, diagonal_nonzero=False,
    )


def _be_log_f(x):
    x = np.asarray(x, dtype=float)
    return 2.0 * np.sqrt(x) - 0.5 * np.log(x)


def make_be_function_weight() -> FunctionWeightSpec:
    """``f(x) = exp(2 sqrt x) / sqrt x``, whose partial sums over ``f(n)`` grow like ``sqrt n``."""
    return FunctionWeightSpec(_be_log_f, "be")


# -- quadrature --------------------------------------------------------------


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     rel_tol: float = 1e-8, max_depth: int = 60) -> float:
    """Adaptive Simpson quadrature of ``f`` over ``[a, b]``.

    Each panel is refined until the Richardson error estimate falls below its
    share of ``rel_tol * |estimate of the whole integral|``.
    """

    def simpson(fa, fm, fb, h):
        return h / 6.0 * (fa + 4.0 * fm + fb)

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    whole = simpson(fa, fm, fb, b - a)
    target = rel_tol * abs(whole) if whole else rel_tol
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, target, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, est, tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        fl = f(0.5 * (lo + mid))
        fr = f(0.5 * (mid + hi))
        left = simpson(flo, fl, fmid, mid - lo)
        right = simpson(fmid, fr, fhi, hi - mid)
        err = left + right - est
        if depth >= max_depth or abs(err) <= 15.0 * tol:
            total += left + right + err / 15.0
        else:
            stack.append((lo, mid, flo, fl, fmid, left, tol / 2.0, depth + 1))
            stack.append((mid, hi, fmid, fr, fhi, right, tol / 2.0, depth + 1))
    return total


def integrate_weight(spec: FunctionWeightSpec, a: float, b: float,
                     rel_tol: float = 1e-8) -> float:
    """``integral_a^b f(x) dx`` with ``f = exp(log_f)``."""

    def f(x):
        return math.exp(float(spec.log_f(np.array([x]))[0]))

    return adaptive_simpson(f, a, b, rel_tol)
