"""Scalar backends.

Matrix entries live in one of two fields: exact rationals
(:class:`fractions.Fraction`) or IEEE doubles.  A third representation,
:class:`LogPositive`, stores strictly positive reals by their logarithm and is
used for partial sums of exponentially growing weights.

Values are plain Python/numpy objects; the backend objects below only decide
how to build, validate and store them.  Mixing backends raises
:class:`~summat.errors.BackendMismatchError` instead of promoting silently.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import BackendMismatchError, LogDomainError, NonFiniteError


@dataclass(frozen=True)
class Field:
    name: str
    dtype: object

    @property
    def zero(self):
        return Fraction(0) if self is EXACT else 0.0

    @property
    def one(self):
        return Fraction(1) if self is EXACT else 1.0

    def coerce(self, value):
        """Validate ``value`` and return it in this field's canonical type."""
        if self is EXACT:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, numbers.Integral):
                return Fraction(int(value))
            raise BackendMismatchError(
                f"exact backend received {type(value).__name__} {value!r}")
        if isinstance(value, (Fraction, LogPositive)):
            raise BackendMismatchError(
                f"float backend received {type(value).__name__} {value!r}")
        out = float(value)
        if not math.isfinite(out):
            raise NonFiniteError(f"non-finite float entry {out!r}")
        return out

    def zeros(self, n: int) -> np.ndarray:
        if self is EXACT:
            out = np.empty(n, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(n)

    def array(self, values: Iterable) -> np.ndarray:
        """Build a validated 1-D array of field elements."""
        if self is EXACT:
            vals = [self.coerce(v) for v in values]
            out = np.empty(len(vals), dtype=object)
            out[:] = vals
            return out
        out = np.asarray(values, dtype=float)
        if out.size and not np.all(np.isfinite(out)):
            raise NonFiniteError("non-finite float entry in row")
        return out

    def check_array(self, arr: np.ndarray) -> np.ndarray:
        if self is EXACT:
            if arr.dtype != object:
                raise BackendMismatchError(f"exact backend received {arr.dtype} array")
            for v in arr:
                if not isinstance(v, Fraction):
                    raise BackendMismatchError(
                        f"exact backend received {type(v).__name__} {v!r}")
            return arr
        if arr.dtype == object:
            raise BackendMismatchError("float backend received an object array")
        if arr.size and not np.all(np.isfinite(arr)):
            raise NonFiniteError("non-finite float entry in row")
        return arr

    def to_float(self, value) -> float:
        return float(value)

    def __repr__(self) -> str:
        return f"<Field {self.name}>"


EXACT = Field("exact", object)
FLOAT = Field("float", np.float64)

BACKENDS = {"exact": EXACT, "float": FLOAT}


def require_same(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f is not first:
            raise BackendMismatchError(f"cannot combine {first.name} and {f.name} backends")
    return first


class LogPositive:
    """A strictly positive real stored as its natural logarithm.

    Addition is a stable log-sum-exp; subtraction is not defined because the
    result could leave the positive reals.
    """

    __slots__ = ("log",)

    def __init__(self, log: float):
        log = float(log)
        if math.isnan(log) or log == math.inf:
            raise NonFiniteError(f"invalid log-magnitude {log!r}")
        if log == -math.inf:
            raise LogDomainError("log-domain values must be strictly positive")
        object.__setattr__(self, "log", log)

    def __setattr__(self, key, value):
        raise AttributeError("LogPositive is immutable")

    @classmethod
    def from_value(cls, x: float) -> "LogPositive":
        if isinstance(x, LogPositive):
            return x
        if not x > 0:
            raise LogDomainError(f"cannot represent {x!r} in the log domain")
        return cls(math.log(x))

    def _other(self, other) -> "LogPositive":
        if not isinstance(other, LogPositive):
            raise BackendMismatchError(
                f"cannot combine LogPositive with {type(other).__name__}")
        return other

    def __add__(self, other):
        o = self._other(other)
        return LogPositive(np.logaddexp(self.log, o.log))

    def __sub__(self, other):
        raise LogDomainError("subtraction is not defined in the log domain")

    __rsub__ = __sub__

    def __mul__(self, other):
        return LogPositive(self.log + self._other(other).log)

    def __truediv__(self, other):
        return LogPositive(self.log - self._other(other).log)

    def __pow__(self, k: float):
        return LogPositive(self.log * k)

    def __eq__(self, other):
        return isinstance(other, LogPositive) and self.log == other.log

    def __lt__(self, other):
        return self.log < self._other(other).log

    def __le__(self, other):
        return self.log <= self._other(other).log

    def __hash__(self):
        return hash(("LogPositive", self.log))

    def isclose(self, other: "LogPositive", rel_tol: float = 1e-12) -> bool:
        return abs(self.log - self._other(other).log) <= rel_tol

    @property
    def value(self) -> float:
        """The real number itself; raises if it does not fit in a double."""
        try:
            return math.exp(self.log)
        except OverflowError as exc:
            raise NonFiniteError(f"exp({self.log}) overflows float64") from exc

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return f"LogPositive(log={self.log!r})"


def log_sum(logs: Iterable[float]) -> float:
    """log(sum(exp(l) for l in logs)) without overflow."""
    arr = np.asarray(list(logs), dtype=float)
    if arr.size == 0:
        return -math.inf
    return float(np.logaddexp.reduce(arr))
