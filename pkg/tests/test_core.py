from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import rational_lower
from summat import catalog
from summat.core import (
    DenseBlock, TriangularMatrix, _generic_product_row, blockwise_inverse, from_dense,
    identity_like, is_probability_prefix, multiply, row_abs_sum, schur_product, solve_row,
    truncate,
)
from summat.errors import BackendMismatchError, SingularMatrixError
from summat.scalar import EXACT, FLOAT


def _dense_product(X, Y):
    return X.dot(Y)


def test_entry_oracle_and_row_oracle_agree():
    A = TriangularMatrix(entry=lambda n, k: Fraction(n + 1, k + 2), backend=EXACT)
    assert list(A.row(3)) == [Fraction(4, 2), Fraction(4, 3), Fraction(4, 4), Fraction(4, 5)]
    assert A[3, 1] == Fraction(4, 3)
    assert A[1, 3] == 0


def test_row_is_read_only_and_memoised():
    calls = []

    def row(n):
        calls.append(n)
        return np.ones(n + 1)

    A = TriangularMatrix(row=row)
    r = A.row(5)
    assert A.row(5) is r
    assert calls == [5]
    with pytest.raises(ValueError):
        r[0] = 2.0


def test_bad_row_shape_is_reported():
    A = TriangularMatrix(row=lambda n: np.ones(n + 2))
    with pytest.raises(ValueError):
        A.row(2)


def test_negative_index():
    with pytest.raises(IndexError):
        identity_like().row(-1)


def test_need_some_oracle():
    with pytest.raises(ValueError):
        TriangularMatrix()


def test_truncate_is_lower_triangular():
    block = truncate(catalog.make_cesaro(EXACT), 6)
    assert block.data.shape == (6, 6)
    assert all(block.data[i, j] == 0 for i in range(6) for j in range(i + 1, 6))
    assert block.data[3, 2] == Fraction(1, 4)


def test_dense_block_csv_and_identity():
    block = truncate(identity_like(EXACT), 3)
    assert block.is_identity()
    assert block.to_csv() == "1,0,0\n0,1,0\n0,0,1\n"
    assert truncate(catalog.make_cesaro(EXACT), 2).to_csv() == "1,0\n1/2,1/2\n"


def test_backend_mismatch_in_product():
    with pytest.raises(BackendMismatchError):
        multiply(identity_like(EXACT), identity_like(FLOAT))


@given(rational_lower(6), rational_lower(6))
def test_lazy_product_matches_dense_product(X, Y):
    A, B = from_dense(X, EXACT), from_dense(Y, EXACT)
    assert truncate(multiply(A, B), 6) == DenseBlock(_dense_product(X, Y), EXACT)


@given(rational_lower(7))
def test_blockwise_inverse_is_a_two_sided_inverse(X):
    A = from_dense(X, EXACT)
    inv = truncate(blockwise_inverse(A), 7)
    assert (inv @ truncate(A, 7)).is_identity()
    assert (truncate(A, 7) @ inv).is_identity()


@given(rational_lower(5))
def test_blockwise_inverse_matches_sympy(X):
    A = from_dense(X, EXACT)
    ref = sympy.Matrix(X.tolist()).inv()
    got = truncate(blockwise_inverse(A), 5).data
    for i in range(5):
        for j in range(5):
            assert sympy.Rational(got[i, j].numerator, got[i, j].denominator) == ref[i, j]


@given(rational_lower(6), st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_solve_row_solves(X, b):
    A = from_dense(X, EXACT)
    b = EXACT.array(b)
    c = solve_row(A, b)
    assert list(c.dot(X)) == list(b)


def test_singular_matrix_names_the_row():
    X = np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 1.0]])
    inv = blockwise_inverse(from_dense(X))
    inv.row(0)
    with pytest.raises(SingularMatrixError) as err:
        inv.row(1)
    assert err.value.row == 1


def test_inverse_rows_do_not_depend_on_truncation():
    A = catalog.make_power_weighted(1.0)
    inv = blockwise_inverse(A)
    small = truncate(inv, 10).data
    large = truncate(inv, 30).data
    assert np.array_equal(small, large[:10, :10])


@given(rational_lower(6, invertible=False), rational_lower(6, invertible=False))
def test_schur_product_is_entrywise(X, Y):
    S = schur_product(from_dense(X, EXACT), from_dense(Y, EXACT))
    got = truncate(S, 6).data
    assert all(got[i, j] == X[i, j] * Y[i, j] for i in range(6) for j in range(6))


@pytest.mark.parametrize("backend", [EXACT, FLOAT])
def test_banded_product_path_matches_generic(backend):
    A = catalog.make_power_weighted(1.0, backend)
    D = catalog.make_delta(backend)
    P = multiply(A, D)
    generic = _generic_product_row(A, D, backend)
    for n in range(80):
        assert np.array_equal(P.row(n), generic(n))


def test_product_metadata():
    P = multiply(catalog.make_cesaro(), catalog.make_cesaro())
    assert P.is_probability is True
    assert P.has_closed_inverse
    D2 = multiply(catalog.make_delta(), catalog.make_delta())
    assert D2.bandwidth == 2


def test_row_abs_sum_exact():
    C = catalog.make_delta(EXACT)
    assert row_abs_sum(C, 0) == 1
    assert row_abs_sum(C, 5) == 2
    assert isinstance(row_abs_sum(C, 5), Fraction)


def test_is_probability_prefix():
    assert is_probability_prefix(catalog.make_cesaro(EXACT), 20)
    assert is_probability_prefix(catalog.make_exp_weighted(), 200)
    assert not is_probability_prefix(catalog.make_delta(), 5)


def test_from_dense_rows_past_block_are_zero():
    A = from_dense(np.eye(3))
    assert np.array_equal(A.row(5), np.zeros(6))
