import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rational_lower
from summat import catalog, pairs
from summat.core import DenseBlock, blockwise_inverse, from_dense, multiply, row_abs_sum, truncate
from summat.errors import ChainError, SingularMatrixError
from summat.evidence import FAILS, HOLDS, INCONCLUSIVE
from summat.pairs import STAR_2C, STAR_3C, STAR_C
from summat.scalar import EXACT, FLOAT

Mp = catalog.make_power_weighted


def _blockwise(A, B):
    return multiply(B, blockwise_inverse(A))


@given(rational_lower(6), rational_lower(6, invertible=False))
def test_transfer_solves_CA_equals_B(X, Y):
    A, B = from_dense(X, EXACT), from_dense(Y, EXACT)
    tm = pairs.transfer(A, B)
    assert truncate(multiply(tm.C, A), 6) == truncate(B, 6)


@pytest.mark.parametrize("p,q", [(0, 1), (1, 0), (-1, 2), (2, -1), (-2, 0), (1, 1)])
def test_mp_mq_closed_form_exact(p, q):
    tm = pairs.transfer(Mp(p, EXACT), Mp(q, EXACT))
    assert tm.provenance == "closed-form:Mp-Mq"
    assert truncate(tm.C, 24) == truncate(_blockwise(Mp(p, EXACT), Mp(q, EXACT)), 24)


@pytest.mark.parametrize("p,q", [(-0.5, 1.0), (0.5, -0.5), (-1.0, -0.5), (-2.0, 0.5)])
def test_mp_mq_closed_form_float(p, q):
    tm = pairs.transfer(Mp(p), Mp(q))
    a = truncate(tm.C, 48).data
    b = truncate(_blockwise(Mp(p), Mp(q)), 48).data
    assert np.max(np.abs(a - b)) <= 1e-10 * max(1.0, np.max(np.abs(b)))


@pytest.mark.parametrize("p,q", [(-2.0, 1.0), (0.0, 2.0), (-1.0, 0.0), (1.0, -1.0)])
def test_closed_form_rowsum_matches_rows(p, q):
    C = pairs.transfer(Mp(p), Mp(q)).C
    for n in (1, 2, 5, 30, 200):
        assert pairs.closed_form_rowsum(p, q, n) == pytest.approx(row_abs_sum(C, n - 1), rel=1e-10)


def test_closed_form_rowsum_is_one_based():
    with pytest.raises(ValueError):
        pairs.closed_form_rowsum(0.0, 1.0, 0)


def test_id_delta_transfer_matches_blockwise_exact():
    B = multiply(Mp(-1, EXACT), catalog.make_delta(EXACT))
    tm = pairs.transfer(catalog.make_cesaro(EXACT), B)
    assert tm.provenance.startswith("closed-form")
    assert truncate(tm.C, 30) == truncate(_blockwise(catalog.make_cesaro(EXACT), B), 30)
    for n in range(2, 30):
        assert float(row_abs_sum(tm.C, n - 1)) == pytest.approx(pairs.id_delta_rowsum(n), rel=1e-12)


def test_transfer_rejects_singular_A():
    with pytest.raises(SingularMatrixError):
        pairs.transfer(catalog.make_counterexample_matrix(), catalog.make_identity())


def test_same_matrix_gives_identity():
    A = Mp(0.5)
    tm = pairs.transfer(A, A)
    assert truncate(tm.C, 5).is_identity()
    assert tm.analytic[STAR_3C][0] == FAILS


def test_identity_to_power_mean_is_bounded_with_sup_one():
    v = pairs.check_star_C(pairs.transfer(catalog.make_identity(), Mp(2)), 1024)
    assert v.status == HOLDS and v.sup == pytest.approx(1.0)


@pytest.mark.parametrize("p", [-2.0, -1.0, 0.0, 1.0])
def test_power_mean_to_identity_is_unbounded(p):
    v = pairs.check_star_C(pairs.transfer(Mp(p), catalog.make_identity()), 2048)
    assert v.status == FAILS
    assert v.numeric_status == FAILS


def test_exp_mean_to_identity():
    vs = pairs.check_all(pairs.transfer(catalog.make_exp_weighted(), catalog.make_identity()), 2048)
    assert vs[STAR_C].status == HOLDS and vs[STAR_2C].status == HOLDS
    assert vs[STAR_C].sup == pytest.approx((math.e + 1) / (math.e - 1), rel=1e-9)
    assert vs[STAR_3C].status == FAILS


@pytest.mark.parametrize("p,q", [(1.0, 0.0), (0.0, 1.0), (-0.5, 2.0), (-1.0, 1.0), (-2.0, -1.5)])
def test_analytic_and_numeric_verdicts_agree(p, q):
    assert pairs.classify_pair_mp_mq(p, q, 2048).contradictions == []


def test_numeric_path_without_closed_forms():
    # opaque copies force the back-substitution route
    from summat.core import TriangularMatrix
    A = Mp(1.0)
    opaque = TriangularMatrix(row=A.row, name="opaque-M1")
    tm = pairs.transfer(opaque, catalog.make_cesaro())
    assert tm.provenance == "blockwise"
    v = pairs.check_star_C(tm, 1024)
    assert v.provenance == "numeric" and v.status == HOLDS


def test_star_3C_on_decaying_transfer():
    B = multiply(Mp(-1), catalog.make_delta())
    v = pairs.check_star_3C(pairs.transfer(catalog.make_cesaro(), B), 4096)
    assert v.status == HOLDS
    assert v.numeric_status in (HOLDS, INCONCLUSIVE)


def test_depth_floor():
    with pytest.raises(ValueError):
        pairs.check_star_C(pairs.transfer(Mp(0), Mp(1)), 8)


def test_witness_sequence_attains_row_sum():
    C = pairs.transfer(Mp(0), Mp(2)).C
    for n in (3, 17, 40):
        z = pairs.witness_sequence(C, n, 64).values
        assert float(np.dot(C.row(n), z[: n + 1])) == pytest.approx(row_abs_sum(C, n))


def test_operator_view():
    view = pairs.operator_view(pairs.transfer(Mp(0), Mp(1)), 512)
    assert view.linf_norm_estimate == pytest.approx(max(view.compact_majorant))
    assert view.linf_norm_estimate < 2 * 2 / 1 - 1 + 1e-9
    assert view.c0_maps_into_c0.status == HOLDS
    assert view.majorant_evidence.status == FAILS


def _verdicts(status_c, status_2c, status_3c, pair):
    return {p: pairs.PropertyVerdict(pair=pair, property=p, status=s)
            for p, s in ((STAR_C, status_c), (STAR_2C, status_2c), (STAR_3C, status_3c))}


def test_compose_rules():
    ab = _verdicts(HOLDS, HOLDS, FAILS, ("A", "B"))
    bd = _verdicts(HOLDS, FAILS, HOLDS, ("B", "D"))
    out = pairs.compose_verdicts(ab, bd)
    assert out[STAR_C].status == HOLDS
    assert out[STAR_2C].status == INCONCLUSIVE
    assert out[STAR_3C].status == HOLDS
    assert out[STAR_C].pair == ("A", "D")


def test_compose_never_fails():
    ab = _verdicts(FAILS, FAILS, FAILS, ("A", "B"))
    bd = _verdicts(FAILS, FAILS, FAILS, ("B", "D"))
    assert {v.status for v in pairs.compose_verdicts(ab, bd).values()} == {INCONCLUSIVE}


def test_compose_requires_a_chain():
    with pytest.raises(ChainError):
        pairs.compose_verdicts(_verdicts(HOLDS, HOLDS, HOLDS, ("A", "B")),
                               _verdicts(HOLDS, HOLDS, HOLDS, ("C", "D")))


def test_be_property_of_function_mean_and_cesaro():
    Mf = catalog.make_function_weighted(catalog.make_be_function_weight())
    out = pairs.be_property_check(Mf, catalog.make_cesaro(), 4096)
    assert out.status == HOLDS
    assert set(out.sub_checks) == {"lim_b_n0", "A,B:*C", "A,B*delta:*3C"}


def test_be_property_fails_without_star_C():
    out = pairs.be_property_check(catalog.make_cesaro(), catalog.make_identity(), 1024)
    assert out.sub_checks["A,B:*C"].status == FAILS
    assert out.status == FAILS


def test_ergodic_transfer_for_identity_pair():
    out = pairs.ergodic_transfer_check(catalog.make_identity(), catalog.make_identity(), 512)
    assert out.status == HOLDS


def test_verdict_json_roundtrip():
    import json
    v = pairs.check_star_C(pairs.transfer(Mp(0), Mp(1)), 256)
    json.dumps(v.to_json(), allow_nan=False)


@pytest.mark.parametrize("a,b", [("id", "cesaro"), ("cesaro", "M-1")])
def test_be_property_examples(a, b):
    mats = {"id": catalog.make_identity(), "cesaro": catalog.make_cesaro(), "M-1": Mp(-1.0)}
    assert pairs.be_property_check(mats[a], mats[b], 4096).status == HOLDS


def test_ergodic_transfer_cesaro_pair():
    M0 = catalog.make_cesaro()
    out = pairs.ergodic_transfer_check(M0, M0, 2048)
    assert out.status == HOLDS


def test_identity_difference_transfer_has_vanishing_columns():
    # (delta, delta) has transfer matrix I, whose columns are eventually zero
    out = pairs.ergodic_transfer_check(catalog.make_identity(), catalog.make_identity(), 256)
    assert out.sub_checks["delta*A,B*delta:*2C"].status == HOLDS


def test_cesaro_inverse_row_sums():
    inv = catalog.make_cesaro(EXACT).closed_inverse
    assert [row_abs_sum(inv, n) for n in range(5)] == [1, 3, 5, 7, 9]
