"""Text specifications for matrices, operators and probe vectors.

Matrices::

    id | cesaro | Mp:<p> | Mexp | Mf:be | delta | delta-inv | counterexample
    <matrix>*<matrix>*...            (left-to-right matrix product)

Operators::

    rot:<degrees>  diag:<a>,<b>,...  neg-id:<d>  scale:<c>:<d>
    jordan:<lambda>:<d>  random:<d>[:<seed>]  file:<path>

Probes are comma-separated coordinates, e.g. ``1,0``.

In the exact backend numbers are parsed as rationals (``1/3``, ``0.25``);
families that need irrational values are rejected there.
"""

from __future__ import annotations

import csv
import math
from fractions import Fraction
from typing import Optional

import numpy as np

from . import catalog
from .core import TriangularMatrix, multiply
from .errors import SpecError
from .operators import FiniteOperator
from .scalar import EXACT, FLOAT, Field

MATRIX_NAMES = ("id", "cesaro", "Mp:<p>", "Mexp", "Mf:be", "delta", "delta-inv", "counterexample")
OPERATOR_FORMS = ("rot:<degrees>", "diag:<a>,<b>,...", "neg-id:<d>", "scale:<c>:<d>",
                  "jordan:<lambda>:<d>", "random:<d>[:<seed>]", "file:<path>")


def backend_named(name: str) -> Field:
    if name == "exact":
        return EXACT
    if name == "float":
        return FLOAT
    raise SpecError(f"unknown scalar backend {name!r}; use 'exact' or 'float'")


def parse_number(text: str, backend: Field = FLOAT):
    """A float, or a :class:`Fraction` in the exact backend."""
    text = text.strip()
    try:
        if backend is EXACT:
            return Fraction(text)
        value = float(Fraction(text)) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise SpecError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise SpecError(f"not a finite number: {text!r}")
    return value


def _parse_int(text: str, what: str, minimum: int = 0) -> int:
    try:
        value = int(text)
    except ValueError:
        raise SpecError(f"{what} must be an integer, got {text!r}") from None
    if value < minimum:
        raise SpecError(f"{what} must be >= {minimum}, got {value}")
    return value


# -- matrices ----------------------------------------------------------------


def _atom(text: str, backend: Field) -> TriangularMatrix:
    exact = backend is EXACT
    if text == "id":
        return catalog.make_identity(backend)
    if text == "cesaro":
        return catalog.make_cesaro(backend)
    if text == "delta":
        return catalog.make_delta(backend)
    if text == "delta-inv":
        return catalog.make_delta_inverse(backend)
    if text == "counterexample":
        return catalog.make_counterexample_matrix(backend)
    if text == "Mexp":
        if exact:
            raise SpecError("Mexp has irrational entries; use --scalar float")
        return catalog.make_exp_weighted()
    if text.startswith("Mf:"):
        name = text[3:]
        if name != "be":
            raise SpecError(f"unknown weight function {name!r}; available: be")
        if exact:
            raise SpecError("Mf:be has irrational entries; use --scalar float")
        return catalog.make_function_weighted(catalog.make_be_function_weight())
    if text.startswith("Mp:"):
        p = parse_number(text[3:], FLOAT)
        if exact and not float(p).is_integer():
            raise SpecError(f"Mp:{text[3:]} has a non-integer power; exact arithmetic needs integer p")
        return catalog.make_power_weighted(float(p), backend)
    raise SpecError(f"unknown matrix {text!r}; expected one of {', '.join(MATRIX_NAMES)} "
                    f"or a '*' product of them")


def parse_matrix(text: str, backend: Field = FLOAT) -> TriangularMatrix:
    """Build the matrix named by ``text`` (products are evaluated left to right)."""
    parts = [t.strip() for t in text.split("*")]
    if not parts or any(not t for t in parts):
        raise SpecError(f"malformed matrix specification {text!r}")
    out = _atom(parts[0], backend)
    for t in parts[1:]:
        out = multiply(out, _atom(t, backend))
    if len(parts) > 1:
        out = out.with_name("*".join(parts))
    return out


# -- operators ---------------------------------------------------------------


def _square(rows: list, backend: Field) -> np.ndarray:
    if backend is EXACT:
        out = np.empty((len(rows), len(rows)), dtype=object)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                out[i, j] = Fraction(v)
        return out
    return np.asarray(rows, dtype=float)


def _eye(d: int, c, backend: Field) -> np.ndarray:
    zero = backend.zero
    return _square([[c if i == j else zero for j in range(d)] for i in range(d)], backend)


def _rotation(deg_text: str, backend: Field) -> np.ndarray:
    deg = parse_number(deg_text, backend)
    if backend is EXACT:
        if deg % 90 != 0:
            raise SpecError("exact rotations must be multiples of 90 degrees")
        c, s = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}[int(deg // 90) % 4]
        return _square([[c, -s], [s, c]], backend)
    t = math.radians(deg)
    c, s = math.cos(t), math.sin(t)
    # snap exact quarter turns so that e.g. rot:180 is exactly -I
    c, s = (round(c) if abs(c - round(c)) < 1e-15 else c), (round(s) if abs(s - round(s)) < 1e-15 else s)
    return np.array([[c, -s], [s, c]], dtype=float)


def _read_csv(path: str, backend: Field) -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise SpecError(f"cannot read operator file {path!r}: {exc}") from None
    values = [[parse_number(c, backend) for c in r] for r in rows]
    if not values or any(len(r) != len(values) for r in values):
        raise SpecError(f"operator file {path!r} must hold a square matrix")
    return _square(values, backend)


def parse_operator(text: str, backend: Field = FLOAT, seed: int = 0) -> FiniteOperator:
    """Build the finite-dimensional operator named by ``text``.

    ``random:<d>`` without an explicit seed uses ``seed``.  Random operators
    have entries uniform in [-1, 1], rescaled to sup-norm 1.
    """
    kind, _, rest = text.partition(":")
    args = rest.split(":") if rest else []
    if kind == "rot" and len(args) == 1:
        M = _rotation(args[0], backend)
    elif kind == "diag" and len(args) == 1:
        vals = [parse_number(v, backend) for v in args[0].split(",")]
        M = _square([[v if i == j else backend.zero for j in range(len(vals))]
                     for i, v in enumerate(vals)], backend)
    elif kind == "neg-id" and len(args) == 1:
        M = _eye(_parse_int(args[0], "dimension", 1), -backend.one, backend)
    elif kind == "scale" and len(args) == 2:
        M = _eye(_parse_int(args[1], "dimension", 1), parse_number(args[0], backend), backend)
    elif kind == "jordan" and len(args) == 2:
        lam, d = parse_number(args[0], backend), _parse_int(args[1], "dimension", 1)
        M = _square([[lam if i == j else (backend.one if j == i + 1 else backend.zero)
                      for j in range(d)] for i in range(d)], backend)
    elif kind == "random" and len(args) in (1, 2):
        if backend is EXACT:
            raise SpecError("random operators are float-only")
        d = _parse_int(args[0], "dimension", 1)
        s = _parse_int(args[1], "seed") if len(args) == 2 else seed
        M = np.random.default_rng(s).uniform(-1.0, 1.0, size=(d, d))
        M /= np.max(np.sum(np.abs(M), axis=1))
    elif kind == "file" and rest:
        M = _read_csv(rest, backend)
    else:
        raise SpecError(f"unknown operator {text!r}; expected one of {', '.join(OPERATOR_FORMS)}")
    return FiniteOperator(M, name=text)


def parse_probe(text: str, backend: Field = FLOAT) -> np.ndarray:
    vals = [parse_number(v, backend) for v in text.split(",")]
    if backend is EXACT:
        out = np.empty(len(vals), dtype=object)
        out[:] = vals
        return out
    return np.asarray(vals, dtype=float)


def default_probes(dim: int, backend: Field = FLOAT) -> list[np.ndarray]:
    """The canonical basis vectors."""
    return [_eye(dim, backend.one, backend)[i] for i in range(dim)]


def check_probe_dims(T: FiniteOperator, probes: list, source: Optional[list] = None) -> None:
    from .errors import DimensionError
    for i, x in enumerate(probes):
        if len(x) != T.dim:
            label = source[i] if source else str(list(x))
            raise DimensionError(f"probe {label} has {len(x)} coordinates, operator {T.name} has {T.dim}")
