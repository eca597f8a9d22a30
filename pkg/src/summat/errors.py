"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SummatError(Exception):
    """Base class for every error raised by this package."""


class BackendMismatchError(SummatError, TypeError):
    """Two scalars or matrices from different arithmetic backends were combined."""


class NonFiniteError(SummatError, OverflowError):
    """A float computation produced inf or nan."""


class LogDomainError(SummatError, ArithmeticError):
    """An operation that is undefined for log-domain positive reals."""


class SingularMatrixError(SummatError, ZeroDivisionError):
    def __init__(self, row: int, name: str = "matrix"):
        super().__init__(f"{name} has a zero diagonal entry at row {row}; not invertible")
        self.row = row


class SpecError(SummatError, ValueError):
    """A matrix or operator specification string could not be parsed."""


class ChainError(SummatError, ValueError):
    """Verdicts passed to a composition rule do not describe chained pairs."""


class DimensionError(SummatError, ValueError):
    """Operator and probe vector dimensions disagree."""


class BudgetError(SummatError, MemoryError):
    """A computation would exceed the configured memory budget."""


class TruncationError(SummatError, ValueError):
    """A requested index lies outside the range where a truncation is faithful."""
