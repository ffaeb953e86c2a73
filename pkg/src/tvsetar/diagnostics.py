"""Series and residual diagnostics: differencing, ACF, Ljung-Box, error metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from tvsetar.errors import ConstantSeries, DomainError
from tvsetar.threshold_models import TimeSeries, as_array

__all__ = ["AcfResult", "LjungBoxResult", "difference", "acf", "ljung_box", "chi2_sf", "error_metrics"]


@dataclass(frozen=True, eq=False)
class AcfResult:
    lags: np.ndarray
    rho: np.ndarray
    T: int

    @property
    def confidence_limit(self) -> float:
        """Half-width of the approximate 95% white-noise band."""
        return 1.96 / math.sqrt(self.T)


@dataclass(frozen=True)
class LjungBoxResult:
    lag: int
    statistic: float
    df: int
    p_value: float


def difference(series, order: int = 1) -> TimeSeries:
    y = as_array(series)
    if order < 0:
        raise DomainError(f"differencing order must be non-negative, got {order}")
    if order >= y.size:
        raise DomainError(f"order {order} leaves no observations from {y.size}")
    z = np.diff(y, n=order) if order else y.copy()
    if z.size < 2:
        raise DomainError("differenced series is shorter than two observations")
    return TimeSeries(z)


def acf(series, max_lag: int) -> AcfResult:
    """Sample autocorrelations at lags ``1..max_lag`` (full-sample denominator)."""
    y = as_array(series)
    T = y.size
    if max_lag < 1 or max_lag >= T / 2:
        raise DomainError(f"max_lag must be in 1..{math.ceil(T / 2) - 1}, got {max_lag}")
    d = y - y.mean()
    denom = float(d @ d)
    if denom <= 0.0:
        raise ConstantSeries("series has zero sample variance")
    rho = np.array([d[k:] @ d[:-k] for k in range(1, max_lag + 1)]) / denom
    return AcfResult(np.arange(1, max_lag + 1), rho, T)


def chi2_sf(x: float, df: int) -> float:
    """Upper tail of the chi-square law via the regularised incomplete gamma."""
    if x <= 0.0:
        return 1.0
    return float(special.gammaincc(df / 2.0, x / 2.0))


def ljung_box(series_or_residuals, h: int, fitted_params: int = 0) -> LjungBoxResult:
    """``Q = T (T+2) sum_k rho_k^2 / (T-k)`` against chi-square with ``h - fitted_params`` df."""
    if not 0 <= fitted_params < h:
        raise DomainError(f"fitted_params must be in 0..{h - 1}, got {fitted_params}")
    r = acf(series_or_residuals, h)
    T = r.T
    Q = float(T * (T + 2) * np.sum(r.rho**2 / (T - r.lags)))
    df = h - fitted_params
    return LjungBoxResult(h, Q, df, chi2_sf(Q, df))


def error_metrics(truth_path, estimate_path) -> tuple[float, float]:
    """``(rmse, mae)`` of ``estimate_path - truth_path``."""
    a = np.asarray(truth_path, dtype=float).ravel()
    b = np.asarray(estimate_path, dtype=float).ravel()
    if a.size != b.size:
        raise DomainError(f"paths differ in length ({a.size} vs {b.size})")
    if a.size == 0:
        raise DomainError("empty paths")
    e = b - a
    return float(np.sqrt(np.mean(e**2))), float(np.mean(np.abs(e)))
