"""Lazy infinite lower-triangular matrices.

A :class:`TriangularMatrix` is an oracle for ``entry(n, k)`` with
``entry(n, k) == 0`` whenever ``k > n``.  Rows are the unit of computation:
``row(n)`` returns the numpy array ``(a[n,0], ..., a[n,n])`` and is memoised.
Products, inverses and Schur products are again lazy oracles, so the infinite
matrix is never materialised; :func:`truncate` produces finite blocks on
demand.

Indexing is 0-based throughout.
"""

from __future__ import annotations

import csv
import io
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import SingularMatrixError
from .scalar import EXACT, FLOAT, Field, require_same

ROW_CACHE_SIZE = 4096

EntryFn = Callable[[int, int], object]
RowFn = Callable[[int], np.ndarray]


class TriangularMatrix:
    """Infinite lower-triangular matrix given by an entry and/or row oracle.

    Parameters
    ----------
    entry, row:
        At least one is required.  ``row(n)`` must return ``n + 1`` values.
    backend:
        :data:`~summat.scalar.EXACT` or :data:`~summat.scalar.FLOAT`.
    bandwidth:
        If known, ``entry(n, k) == 0`` for ``k < n - bandwidth``.  Used to keep
        products with banded factors linear per row.
    family:
        Hashable tag describing how the matrix was built, e.g. ``("Mp", 2.0)``
        or ``("product", tagC, tagA)``.  Closed-form shortcuts key on it.
    closed_inverse:
        A matrix, or a zero-argument callable returning one.
    index_base_note:
        Free-form record of how a 1-based source formula was shifted.
    """

    def __init__(
        self,
        entry: Optional[EntryFn] = None,
        *,
        row: Optional[RowFn] = None,
        backend: Field = FLOAT,
        name: str = "A",
        family: tuple = ("opaque",),
        is_probability: Optional[bool] = None,
        diagonal_nonzero: Optional[bool] = None,
        bandwidth: Optional[int] = None,
        closed_inverse=None,
        index_base_note: str = "0-based",
    ):
        if entry is None and row is None:
            raise ValueError("need an entry or a row oracle")
        self.backend = backend
        self.name = name
        self.family = family
        self.is_probability = is_probability
        self.diagonal_nonzero = diagonal_nonzero
        self.bandwidth = bandwidth
        self.index_base_note = index_base_note
        self._entry_fn = entry
        self._row_fn = row
        self._inverse = closed_inverse
        self._inverse_lock = threading.Lock()
        self._row_cached = lru_cache(maxsize=ROW_CACHE_SIZE)(self._compute_row)

    def __repr__(self) -> str:
        return f"TriangularMatrix({self.name}, backend={self.backend.name})"

    # -- oracles -----------------------------------------------------------

    def _compute_row(self, n: int) -> np.ndarray:
        if self._row_fn is not None:
            out = self.backend.check_array(np.asarray(self._row_fn(n),
                                                      dtype=self.backend.dtype))
            if out.shape != (n + 1,):
                raise ValueError(f"row oracle of {self.name} returned shape {out.shape} for row {n}")
        else:
            lo = self.band_start(n)
            out = self.backend.zeros(n + 1)
            for k in range(lo, n + 1):
                out[k] = self.backend.coerce(self._entry_fn(n, k))
        out.setflags(write=False)
        return out

    def row(self, n: int) -> np.ndarray:
        """Entries ``(a[n,0], ..., a[n,n])`` as a read-only array."""
        if n < 0:
            raise IndexError(f"row index must be >= 0, got {n}")
        return self._row_cached(int(n))

    def band_start(self, n: int) -> int:
        if self.bandwidth is None:
            return 0
        return max(0, n - self.bandwidth)

    def row_band(self, n: int) -> tuple[int, np.ndarray]:
        """``(start, values)`` with ``values = row(n)[start:]``; zeros outside."""
        lo = self.band_start(n)
        return lo, self.row(n)[lo:]

    def entry(self, n: int, k: int):
        if n < 0 or k < 0:
            raise IndexError(f"indices must be >= 0, got ({n}, {k})")
        if k > n:
            return self.backend.zero
        if self._entry_fn is not None and self._row_fn is None:
            if k < self.band_start(n):
                return self.backend.zero
            return self.backend.coerce(self._entry_fn(n, k))
        return self.row(n)[k]

    def __getitem__(self, nk: tuple[int, int]):
        return self.entry(*nk)

    def diagonal(self, n: int):
        return self.entry(n, n)

    @property
    def closed_inverse(self) -> Optional["TriangularMatrix"]:
        with self._inverse_lock:
            if callable(self._inverse) and not isinstance(self._inverse, TriangularMatrix):
                self._inverse = self._inverse()
            return self._inverse

    @property
    def has_closed_inverse(self) -> bool:
        return self._inverse is not None

    def with_name(self, name: str) -> "TriangularMatrix":
        """Same oracle under another display name (shares the row cache)."""
        clone = object.__new__(TriangularMatrix)
        clone.__dict__.update(self.__dict__)
        clone.name = name
        return clone


@dataclass(frozen=True)
class DenseBlock:
    """Finite ``size x size`` leading block of a triangular matrix."""

    data: np.ndarray
    backend: Field

    @property
    def size(self) -> int:
        return self.data.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseBlock) or other.backend is not self.backend:
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.all(self.data == other.data))

    def __matmul__(self, other: "DenseBlock") -> "DenseBlock":
        require_same(self.backend, other.backend)
        return DenseBlock(self.data.dot(other.data), self.backend)

    def is_identity(self, atol: float = 0.0) -> bool:
        eye = np.eye(self.size)
        if self.backend is EXACT:
            return all(self.data[i, j] == int(eye[i, j])
                       for i in range(self.size) for j in range(self.size))
        return bool(np.max(np.abs(self.data.astype(float) - eye)) <= atol)

    def as_float(self) -> np.ndarray:
        return self.data.astype(float)

    def to_csv(self) -> str:
        """Row-major CSV; rationals as ``p/q``, floats in shortest round-trip form."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for r in self.data:
            writer.writerow(format_scalar(v) for v in r)
        return buf.getvalue()


def format_scalar(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def truncate(A: TriangularMatrix, N: int) -> DenseBlock:
    """Leading ``N x N`` block ``(a[n,k])`` for ``0 <= n, k < N``."""
    if N < 1:
        raise ValueError("truncation size must be >= 1")
    if A.backend is EXACT:
        data = np.empty((N, N), dtype=object)
        data.fill(Fraction(0))
    else:
        data = np.zeros((N, N))
    for n in range(N):
        data[n, : n + 1] = A.row(n)
    return DenseBlock(data, A.backend)


def _product_tag(C: TriangularMatrix, A: TriangularMatrix) -> tuple:
    return ("product", C.family, A.family)


class _BandDiagonals:
    """Grow-on-demand table ``D[j, d] = A[j, j - d]`` for a banded ``A``."""

    def __init__(self, A: TriangularMatrix):
        self.A = A
        self.width = A.bandwidth + 1
        self.table = A.backend.zeros((0, self.width)) if A.backend is FLOAT else np.empty((0, self.width), dtype=object)
        self.lock = threading.Lock()

    def upto(self, n: int) -> np.ndarray:
        with self.lock:
            have = self.table.shape[0]
            if have <= n:
                size = max(n + 1, 2 * have, 64)
                grown = np.empty((size, self.width), dtype=self.table.dtype)
                grown[:have] = self.table
                zero = self.A.backend.zero
                for j in range(have, size):
                    r = self.A.row(j)
                    for d in range(self.width):
                        grown[j, d] = r[j - d] if d <= j else zero
                self.table = grown
            return self.table


def multiply(C: TriangularMatrix, A: TriangularMatrix) -> TriangularMatrix:
    """Lazy product ``(CA)[n,k] = sum_{j=k..n} C[n,j] A[j,k]``."""
    backend = require_same(C.backend, A.backend)

    if A.bandwidth is not None and A.bandwidth < 16:
        band = _BandDiagonals(A)

        def row(n: int) -> np.ndarray:
            # (CA)[n,k] = sum_d C[n,k+d] A[k+d,k]: one vector op per diagonal
            lo, cvals = C.row_band(n)
            c = backend.zeros(n + 1)
            c[lo:] = cvals
            D = band.upto(n)
            acc = backend.zeros(n + 1)
            for d in range(min(band.width, n + 1)):
                acc[: n + 1 - d] += c[d:] * D[d: n + 1, d]
            return acc
    else:
        row = _generic_product_row(C, A, backend)

    bw = None
    if C.bandwidth is not None and A.bandwidth is not None:
        bw = C.bandwidth + A.bandwidth

    inverse = None
    if C.has_closed_inverse and A.has_closed_inverse:
        inverse = lambda: multiply(A.closed_inverse, C.closed_inverse)

    return TriangularMatrix(
        row=row,
        backend=backend,
        name=f"{C.name}*{A.name}",
        family=_product_tag(C, A),
        is_probability=True if (C.is_probability and A.is_probability) else None,
        diagonal_nonzero=True if (C.diagonal_nonzero and A.diagonal_nonzero) else None,
        bandwidth=bw,
        closed_inverse=inverse,
    )


def _generic_product_row(C: TriangularMatrix, A: TriangularMatrix, backend: Field):
    def row(n: int) -> np.ndarray:
        acc = backend.zeros(n + 1)
        lo, cvals = C.row_band(n)
        for offset, c in enumerate(cvals):
            if c == 0:
                continue
            j = lo + offset
            s, avals = A.row_band(j)
            acc[s: j + 1] += c * avals
        return acc

    return row


def solve_row(A: TriangularMatrix, b: np.ndarray) -> np.ndarray:
    """Row vector ``c`` (length ``len(b)``) with ``(c A)[k] = b[k]`` for ``k < len(b)``.

    Back substitution over the rows of ``A``: only rows ``0..n`` are touched,
    so the answer for a given ``n`` never depends on larger truncations.
    """
    backend = A.backend
    n = len(b) - 1
    acc = backend.zeros(n + 1)
    c = backend.zeros(n + 1)
    for k in range(n, -1, -1):
        s, avals = A.row_band(k)
        akk = avals[-1]
        if akk == 0:
            raise SingularMatrixError(k, A.name)
        ck = (b[k] - acc[k]) / akk
        if ck != 0:
            c[k] = ck
            acc[s: k + 1] += ck * avals
    return c


def blockwise_inverse(A: TriangularMatrix) -> TriangularMatrix:
    """Lazy inverse; row ``n`` solves ``d A = e_n`` by back substitution.

    Raises :class:`SingularMatrixError` (naming the row) when a zero diagonal
    entry is met while computing a row.
    """
    backend = A.backend

    def row(n: int) -> np.ndarray:
        e = backend.zeros(n + 1)
        e[n] = backend.one
        return solve_row(A, e)

    return TriangularMatrix(
        row=row,
        backend=backend,
        name=f"inv({A.name})",
        family=("inverse", A.family),
        diagonal_nonzero=True,
        closed_inverse=A,
    )


def schur_product(D: TriangularMatrix, A: TriangularMatrix) -> TriangularMatrix:
    """Entrywise product ``(D x A)[n,k] = D[n,k] * A[n,k]``."""
    backend = require_same(D.backend, A.backend)
    bws = [b for b in (D.bandwidth, A.bandwidth) if b is not None]
    return TriangularMatrix(
        row=lambda n: D.row(n) * A.row(n),
        backend=backend,
        name=f"{D.name}x{A.name}",
        family=("schur", D.family, A.family),
        bandwidth=min(bws) if bws else None,
    )


def row_abs_sum(A: TriangularMatrix, n: int):
    """``sum_k |a[n,k]|`` (exact in the rational backend)."""
    r = A.row(n)
    if A.backend is EXACT:
        return sum((abs(v) for v in r), Fraction(0))
    return float(np.sum(np.abs(r)))


def column_sequence(A: TriangularMatrix, k: int, N: int) -> list:
    """``[a[0,k], ..., a[N-1,k]]``."""
    return [A.entry(n, k) for n in range(N)]


def is_probability_prefix(A: TriangularMatrix, N: int, atol: float = 1e-12) -> bool:
    """Nonnegative entries and unit row sums on rows ``0..N-1``.

    Equality is exact for the rational backend; ``atol`` applies to floats.
    """
    for n in range(N):
        r = A.row(n)
        if A.backend is EXACT:
            if any(v < 0 for v in r) or sum(r, Fraction(0)) != 1:
                return False
        else:
            if np.any(r < 0) or abs(float(np.sum(r)) - 1.0) > atol:
                return False
    return True


def identity_like(backend: Field = FLOAT) -> TriangularMatrix:
    one, zero = backend.one, backend.zero

    def row(n):
        r = backend.zeros(n + 1)
        r[n] = one
        return r

    return TriangularMatrix(
        entry=lambda n, k: one if n == k else zero,
        row=row,
        backend=backend,
        name="id",
        family=("id",),
        is_probability=True,
        diagonal_nonzero=True,
        bandwidth=0,
        closed_inverse=lambda: identity_like(backend),
    )


def from_dense(block: np.ndarray, backend: Field = FLOAT, name: str = "dense") -> TriangularMatrix:
    """Matrix whose leading block is ``block`` (lower part) and zero beyond it."""
    size = block.shape[0]

    def row(n):
        r = backend.zeros(n + 1)
        if n < size:
            r[:] = block[n, : n + 1]
        return r

    # rows past the block are zero, so the infinite matrix is never invertible
    return TriangularMatrix(row=row, backend=backend, name=name, family=("dense", name))


__all__ = [
    "TriangularMatrix", "DenseBlock", "truncate", "multiply", "blockwise_inverse",
    "solve_row", "schur_product", "row_abs_sum", "column_sequence",
    "is_probability_prefix", "identity_like", "from_dense", "format_scalar",
    "EXACT", "FLOAT",
]
