import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _oracles import chi2_sf_even
from tvsetar.diagnostics import acf, chi2_sf, difference, error_metrics, ljung_box
from tvsetar.errors import ConstantSeries, DomainError

finite = st.floats(-1e3, 1e3, allow_nan=False)


def _chi2_sf_quad(x, df):
    # direct quadrature of the chi-square density, independent of the incomplete gamma
    k = mpmath.mpf(df) / 2
    dens = lambda t: t ** (k - 1) * mpmath.e ** (-t / 2) / (2**k * mpmath.gamma(k))
    return float(mpmath.quad(dens, [x, x + 50, mpmath.inf]))


# -- differencing


def test_difference_examples():
    assert difference([1.0, 3.0, 6.0]).values.tolist() == [2.0, 3.0]
    assert difference([1.0, 3.0, 6.0, 10.0], 2).values.tolist() == [1.0, 1.0]
    assert not np.any(difference(np.full(10, 4.2)).values)
    assert difference([1.0, 2.0, 4.0], 0).values.tolist() == [1.0, 2.0, 4.0]


def test_difference_errors():
    with pytest.raises(DomainError):
        difference([1.0, 2.0, 3.0], 3)
    with pytest.raises(DomainError):
        difference([1.0, 2.0, 3.0], 2)
    with pytest.raises(DomainError):
        difference([1.0, 2.0, 3.0], -1)


@given(st.lists(st.integers(-1000, 1000), min_size=3, max_size=60))
def test_difference_inverts_cumsum(x):
    x = np.array(x, dtype=float)
    assert np.array_equal(difference(np.cumsum(x)).values, x[1:])


# -- autocorrelation


def test_acf_alternating():
    r = acf([1.0, -1.0, 1.0, -1.0], 1)
    assert r.rho[0] == pytest.approx(-0.75, abs=1e-15)
    assert r.confidence_limit == pytest.approx(1.96 / 2)
    assert r.lags.tolist() == [1]


def test_acf_lag_bounds():
    with pytest.raises(DomainError):
        acf(np.arange(10.0), 5)
    with pytest.raises(DomainError):
        acf(np.arange(10.0), 0)
    assert acf(np.arange(10.0), 4).rho.size == 4


def test_acf_constant_series():
    with pytest.raises(ConstantSeries):
        acf(np.full(20, 3.0), 3)


def test_acf_iid_within_limits():
    T = 4096
    hits = 0
    for seed in range(200):
        y = np.random.default_rng(seed).normal(size=T)
        hits += abs(acf(y, 1).rho[0]) < 3 / math.sqrt(T)
    assert hits / 200 >= 0.99


@given(st.lists(finite, min_size=8, max_size=60))
def test_acf_reversal_symmetry(y):
    y = np.array(y)
    if np.ptp(y) < 1e-6:
        return
    h = y.size // 2 - 1
    a = acf(y, h).rho
    b = acf(y[::-1].copy(), h).rho
    assert np.allclose(a, b, atol=1e-10)
    assert np.all(np.abs(a) <= 1 + 1e-12)


# -- Ljung-Box


def test_ljung_box_orthogonal_series():
    x = np.zeros(64)
    x[0], x[-1] = 1.0, -1.0
    r = ljung_box(x, 20)
    assert r.statistic == 0.0
    assert r.p_value == 1.0
    assert r.df == 20


def test_ljung_box_formula():
    y = np.random.default_rng(4).normal(size=200)
    h = 10
    rho = acf(y, h).rho
    T = 200
    Q = T * (T + 2) * sum(rho[k - 1] ** 2 / (T - k) for k in range(1, h + 1))
    r = ljung_box(y, h, fitted_params=2)
    assert r.statistic == pytest.approx(Q, rel=1e-12)
    assert r.df == 8
    assert r.p_value == pytest.approx(chi2_sf_even(Q, 8), rel=1e-10)


def test_ljung_box_fitted_params_bounds():
    y = np.random.default_rng(0).normal(size=100)
    with pytest.raises(DomainError):
        ljung_box(y, 5, fitted_params=5)


def test_chi2_tail_at_df():
    # the independent oracle gives 0.4579297...
    assert chi2_sf(20.0, 20) == pytest.approx(chi2_sf_even(20.0, 20), abs=0.02)
    assert chi2_sf(20.0, 20) == pytest.approx(0.45, abs=0.02)


@pytest.mark.parametrize("df", [1, 2, 3, 7, 10, 20, 29, 30])
@pytest.mark.parametrize("x", [0.5, 5.0, 20.0, 45.0])
def test_chi2_tail_oracles(x, df):
    want = chi2_sf_even(x, df) if df % 2 == 0 else _chi2_sf_quad(x, df)
    assert chi2_sf(x, df) == pytest.approx(want, rel=1e-10, abs=1e-300)


@given(st.floats(0, 200), st.floats(0, 50), st.integers(1, 40))
def test_chi2_tail_monotone(q, dq, df):
    assert chi2_sf(q + dq, df) <= chi2_sf(q, df)
    assert 0.0 <= chi2_sf(q, df) <= 1.0


# -- error metrics


def test_error_metrics_examples():
    assert error_metrics([0.0, 0.0], [3.0, 4.0]) == pytest.approx((math.sqrt(12.5), 3.5), abs=1e-15)
    assert error_metrics([1.0, 2.0], [1.0, 2.0]) == (0.0, 0.0)
    assert error_metrics(np.zeros(5), np.full(5, -2.0)) == pytest.approx((2.0, 2.0))
    with pytest.raises(DomainError):
        error_metrics([1.0], [1.0, 2.0])


def test_rmse_dominates_mae_random():
    rng = np.random.default_rng(8)
    for _ in range(1000):
        n = int(rng.integers(1, 50))
        rmse, mae = error_metrics(rng.normal(size=n), rng.standard_cauchy(size=n))
        assert rmse >= mae * (1 - 1e-12)
