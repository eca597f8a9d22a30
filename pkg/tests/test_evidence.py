import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from summat import evidence as ev
from summat.evidence import FAILS, HOLDS, INCONCLUSIVE, Thresholds


def _seq(f, N=4096):
    grid = ev.geometric_grid(N)
    return grid, [f(n) for n in grid]


@given(st.integers(min_value=1, max_value=100_000), st.floats(min_value=1.05, max_value=3.0))
def test_grid_shape(N, ratio):
    g = ev.geometric_grid(N, ratio)
    assert g == sorted(set(g))
    assert g[0] == 0 and g[-1] == N - 1
    assert all(0 <= n < N for n in g)
    assert set(range(min(16, N))) <= set(g)


def test_grid_rejects_empty():
    with pytest.raises(ValueError):
        ev.geometric_grid(0)


@given(st.floats(min_value=-3, max_value=3), st.floats(min_value=0.1, max_value=10))
def test_slope_of_pure_power(a, c):
    ns = np.arange(10, 1000, 37)
    assert ev.loglog_slope(ns, c * ns.astype(float) ** a) == pytest.approx(a, abs=1e-9)


def test_slope_needs_two_positive_points():
    assert ev.loglog_slope([1, 2], [0.0, 1.0]) is None


def test_thresholds_validate():
    with pytest.raises(ValueError):
        Thresholds(tol=0)
    with pytest.raises(ValueError):
        Thresholds(ratio=1.0)


@pytest.mark.parametrize("f,status", [
    (lambda n: 1.0, HOLDS),
    (lambda n: 2.0 - 1.0 / (n + 1), HOLDS),
    (lambda n: 3.0 - 2.0 / math.sqrt(n + 1), HOLDS),
    (lambda n: (n + 1) ** 0.5, FAILS),
    (lambda n: float(n + 1), FAILS),
    (lambda n: 0.0, HOLDS),
])
def test_bounded_verdict(f, status):
    assert ev.bounded_verdict(*_seq(f)).status == status


@pytest.mark.parametrize("f,status", [
    (lambda n: 1.0 / (n + 1), HOLDS),
    (lambda n: (n + 1) ** -0.5, HOLDS),
    (lambda n: 0.0, HOLDS),
    (lambda n: 1.0, FAILS),
    (lambda n: float(n), FAILS),
    (lambda n: 0.3 + 1.0 / (n + 1), FAILS),
    (lambda n: 0.5 + (n + 1) ** -0.5, FAILS),
])
def test_decay_verdict(f, status):
    assert ev.decay_verdict(*_seq(f)).status == status


def test_decay_judges_oscillations_by_their_peaks():
    grid, vals = _seq(lambda n: 1.0 if n % 2 else 0.0)
    e = ev.decay_verdict(grid, vals)
    assert e.status == FAILS


def test_slow_log_decay_is_not_called_a_failure():
    grid, vals = _seq(lambda n: 1.0 / math.log(n + 2))
    assert ev.decay_verdict(grid, vals).status in (HOLDS, INCONCLUSIVE)


def test_evidence_json_is_finite():
    e = ev.decay_verdict(*_seq(lambda n: 1.0 / (n + 1)))
    j = e.to_json()
    assert j["status"] == HOLDS
    assert j["window"][1] == 4095
    assert all(s is None or math.isfinite(s) for s in j["window_slopes"])


def test_growth_slope_is_fitted_to_raw_values():
    e = ev.bounded_verdict(*_seq(lambda n: (n + 1) ** 1.5))
    assert e.slope == pytest.approx(1.5, abs=0.01)


def test_cauchy_profile_vectors():
    pts = np.array([[1.0 / (n + 1), 0.0] for n in range(100)])
    ns, cs = ev.cauchy_profile(pts, ev.geometric_grid(100))
    assert max(ns) <= 99 // 4
    n = ns[-1]
    assert cs[-1] == pytest.approx(1.0 / (n + 1) - 1.0 / (min(4 * n, 99) + 1))


def test_convergence_verdict():
    conv = np.array([[1.0 + 1.0 / (n + 1)] for n in range(2048)])
    osc = np.array([[(-1.0) ** n] for n in range(2048)])
    assert ev.convergence_verdict(conv).status == HOLDS
    assert ev.convergence_verdict(osc).status == FAILS


def test_rising_cauchy_profile_is_inconclusive():
    # y_n = 1 - n/2000 is still moving linearly: not yet settled, not divergent
    pts = np.array([[1.0 - n / 2000.0] for n in range(512)])
    assert ev.convergence_verdict(pts).status == INCONCLUSIVE


@given(st.lists(st.sampled_from(ev.STATUSES), min_size=1, max_size=6))
def test_combine_is_a_conjunction(statuses):
    out = ev.combine(statuses)
    if FAILS in statuses:
        assert out == FAILS
    elif all(s == HOLDS for s in statuses):
        assert out == HOLDS
    else:
        assert out == INCONCLUSIVE
