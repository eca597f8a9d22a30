"""Summation matrices, their transfer properties, and matrix means of operators."""

from .catalog import (
    make_be_function_weight,
    make_cesaro,
    make_counterexample_matrix,
    make_delta,
    make_delta_inverse,
    make_exp_weighted,
    make_function_weighted,
    make_identity,
    make_power_weighted,
    partial_sum,
)
from .core import DenseBlock, TriangularMatrix, blockwise_inverse, multiply, schur_product, truncate
from .evidence import FAILS, HOLDS, INCONCLUSIVE, Evidence, Thresholds
from .operators import FiniteOperator, classify
from .pairs import check_star_2C, check_star_3C, check_star_C, transfer
from .scalar import EXACT, FLOAT

__version__ = "0.1.0"
