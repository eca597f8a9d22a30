import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from summat import catalog
from summat import operators as ops
from summat.errors import BudgetError, DimensionError, NonFiniteError, TruncationError
from summat.evidence import FAILS, HOLDS

BASIS = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]


def rot(deg):
    t = math.radians(deg)
    return ops.FiniteOperator(np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]]), f"rot{deg}")


def test_operator_must_be_square():
    with pytest.raises(DimensionError):
        ops.FiniteOperator(np.zeros((2, 3)))


def test_power_budget():
    T = ops.FiniteOperator(np.eye(4), budget=100)
    with pytest.raises(BudgetError):
        T.powers(10)


def test_overflow_is_reported():
    T = ops.FiniteOperator(np.array([[1e200]]))
    with pytest.raises(NonFiniteError):
        T.powers(4)


def test_exact_powers():
    M = np.array([[Fraction(1, 2), Fraction(1)], [Fraction(0), Fraction(1, 3)]], dtype=object)
    T = ops.FiniteOperator(M)
    P = T.power(3)
    assert P[0, 0] == Fraction(1, 8) and P[1, 1] == Fraction(1, 27)
    assert isinstance(P[0, 1], Fraction)


def test_norms():
    M = np.array([[1.0, -2.0], [0.5, 0.5]])
    assert ops.sup_norm(M) == 3.0
    assert ops.spectral_norm(M) == pytest.approx(np.linalg.norm(M, 2), rel=1e-8)


@given(st.integers(min_value=0, max_value=30), st.floats(min_value=-1, max_value=1))
def test_expected_value_is_the_weighted_sum(n, c):
    T = ops.FiniteOperator(np.array([[c, 1.0], [0.0, -0.5]]))
    A = catalog.make_power_weighted(1.0)
    direct = sum(A.entry(n, i) * np.linalg.matrix_power(T.matrix, i) for i in range(n + 1))
    assert np.allclose(ops.expected_value(A, T, n), direct, atol=1e-12)
    x = np.array([0.3, -1.0])
    assert np.allclose(ops.expected_value_at(A, T, x, n), direct @ x, atol=1e-12)


def test_trajectory_matches_expected_values():
    A, T = catalog.make_cesaro(), rot(30)
    tr = ops.trajectory(A, T, BASIS[0], 40)
    for n in (0, 7, 39):
        assert np.allclose(tr.points[n], ops.expected_value_at(A, T, BASIS[0], n))
    assert tr.to_csv().splitlines()[0] == "n,norm,diff_norm"


def test_probe_dimension_checked():
    with pytest.raises(DimensionError):
        ops.trajectory(catalog.make_cesaro(), rot(90), np.ones(3), 16)


def test_cesaro_rotation_is_null():
    v = ops.classify(catalog.make_cesaro(), rot(90), BASIS, 512)
    assert v.bounded.status == HOLDS
    assert v.null.status == HOLDS and v.ergodic.status == HOLDS
    assert np.allclose(v.limit, 0.0)


def test_cesaro_identity_is_ergodic_not_null():
    v = ops.classify(catalog.make_cesaro(), ops.FiniteOperator(np.eye(2)), BASIS, 512)
    assert v.ergodic.status == HOLDS and v.null.status == FAILS
    assert np.allclose(v.limit, np.eye(2))


def test_identity_matrix_rotation_is_not_ergodic():
    v = ops.classify(catalog.make_identity(), rot(90), BASIS, 512)
    assert v.bounded.status == HOLDS
    assert v.ergodic.status == FAILS


def test_expanding_operator_is_unbounded():
    T = ops.FiniteOperator(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert ops.classify(catalog.make_cesaro(), T, BASIS, 512).bounded.status == FAILS


def test_unbounded_means_are_not_ergodic():
    T = ops.FiniteOperator(np.array([[1.0, 1.0], [0.0, 1.0]]))
    v = ops.classify(catalog.make_cesaro(), T, BASIS, 512)
    assert v.ergodic.status == FAILS


def test_slow_decay_at_shallow_depth_is_inconclusive():
    T = ops.FiniteOperator(np.array([[0.999]]))
    v = ops.classify(catalog.make_cesaro(), T, [np.array([1.0])], 64)
    assert v.bounded.status == HOLDS
    assert v.ergodic.status == v.null.status == "inconclusive"
    assert ops.classify(catalog.make_cesaro(), T, [np.array([1.0])], 4096).null.status == HOLDS


def test_counterexample_with_negative_identity():
    T = ops.FiniteOperator(-np.eye(2), "neg-id")
    v = ops.classify(catalog.make_counterexample_matrix(), T, [BASIS[0]], 512)
    assert v.ergodic.status == HOLDS
    assert np.allclose(v.limit, np.eye(2), atol=1e-12)
    assert v.delta_A_null.status == HOLDS
    assert v.limit_T_invariant.status == FAILS
    res = v.limit_T_invariant.last
    assert res == pytest.approx(2.0, abs=1e-12)


def test_exp_mean_oscillates_for_negative_identity():
    T = ops.FiniteOperator(-np.eye(2))
    tr = ops.trajectory(catalog.make_exp_weighted(), T, BASIS[0], 512)
    assert tr.norms[-1] == pytest.approx((math.e - 1) / (math.e + 1), abs=1e-12)
    assert ops.classify(catalog.make_exp_weighted(), T, BASIS, 512).ergodic.status == FAILS


def test_difference_matrix_route_agrees():
    A, T = catalog.make_power_weighted(1.0), rot(120)
    direct = ops.classify(A, T, [BASIS[0]], 256).delta_A_null
    via = ops.delta_null_via_difference_matrix(A, T, BASIS[0], 256)
    assert direct.status == via.status == HOLDS
    assert direct.last == pytest.approx(via.last, rel=1e-12)


def test_absolutely_bounded():
    A = catalog.make_cesaro()
    assert ops.absolutely_bounded_check(A, rot(90), 512).status == HOLDS
    T = ops.FiniteOperator(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert ops.absolutely_bounded_check(A, T, 512).status == FAILS


def test_eberlein_limit_in_orbit_hull():
    T = ops.FiniteOperator(np.array([[1.0, 0.0], [0.0, -1.0]]))
    res = ops.eberlein_check(catalog.make_cesaro(), T, np.array([1.0, 1.0]), 512)
    assert res.limit_exists.status == HOLDS
    assert np.allclose(res.y, [1.0, 0.0], atol=1e-2)
    assert res.fixed_point_residual < 1e-2
    assert res.hull_distance < 1e-2


def test_eberlein_without_limit():
    res = ops.eberlein_check(catalog.make_identity(), rot(90), BASIS[0], 256)
    assert res.limit_exists.status == FAILS and res.y is None


def test_shift_family_needs_enough_coordinates():
    with pytest.raises(TruncationError):
        ops.shift_family_test(catalog.make_cesaro(), catalog.make_cesaro(), 16, 32)


def test_shift_family_same_matrix_is_bounded():
    A = catalog.make_power_weighted(1.0)
    out = ops.shift_family_test(A, A, 256, 256)
    assert out.status == HOLDS
    # the witness realises the norm on the top row
    assert np.allclose(out.witness_values, out.norms)


def test_shift_family_unbounded():
    out = ops.shift_family_test(catalog.make_cesaro(), catalog.make_identity(), 512, 512)
    assert out.status == FAILS


def test_coordinate_family_matches_transfer_rows():
    A, B = catalog.make_power_weighted(1.0), catalog.make_cesaro()
    out = ops.coordinate_family_test(A, B, 256, 256)
    from summat.pairs import transfer
    C = transfer(A, B).C
    for n, s in zip(out.rows, out.row_abs_sums):
        assert s == pytest.approx(float(np.sum(np.abs(C.row(n)))), rel=1e-10)


def test_limit_invariant_transfer_probe_same_matrix():
    A = catalog.make_counterexample_matrix()
    res = ops.limit_invariant_transfer_probe(A, A, rot(90), BASIS[0], 256)
    assert res.K_C == 1.0
    assert res.bound_holds


def test_limit_invariant_transfer_probe_holds():
    res = ops.limit_invariant_transfer_probe(catalog.make_power_weighted(1.0), catalog.make_cesaro(),
                                             rot(90), BASIS[0], 512)
    assert res.applicable and res.status == HOLDS
