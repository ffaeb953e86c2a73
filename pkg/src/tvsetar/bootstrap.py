"""Residual bootstrap for fitted threshold models.

Each replicate resamples the centred residuals with replacement, re-runs the
fitted recursion from the observed ``y(0)`` against the fitted threshold
path, and refits with the original family and search box. Percentile
intervals cover the regime parameters and the innovation variance, and a
sup-t band covers the threshold path.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from tvsetar.errors import BootstrapUnstable, DomainError, FitFailed
from tvsetar.estimation import (
    PARAM_NAMES,
    ConstantFamily,
    FitResult,
    SearchSpace,
    fit_constant,
    fit_family,
    fit_wavelet,
)
from tvsetar.threshold_models import SetarModel, TimeSeries, as_array, simulate, simulate_path
from tvsetar.wavelets import WaveletBasis, make_basis

__all__ = [
    "BootstrapResult",
    "CoverageReport",
    "center_residuals",
    "resample_path",
    "percentile_interval",
    "sup_t_band",
    "bootstrap_model",
    "coverage_experiment",
]


@dataclass(frozen=True, eq=False)
class BootstrapResult:
    """Output of :func:`bootstrap_model`.

    ``estimates`` has one row per surviving replicate with columns
    ``(phi0_low, phi1_low, phi0_high, phi1_high, sigma2)``; ``intervals`` is
    ``(5, 2)`` and ``band`` is ``(T, 2)``.
    """

    B: int
    estimates: np.ndarray
    threshold_paths: np.ndarray
    intervals: np.ndarray
    band: np.ndarray
    c_crit: float
    seed: int
    alpha: float
    gamma_hat: np.ndarray
    dropped: int = 0
    floored: int = 0

    def interval(self, name: str) -> tuple[float, float]:
        lo, hi = self.intervals[PARAM_NAMES.index(name)]
        return float(lo), float(hi)


@dataclass(frozen=True)
class CoverageReport:
    monte_carlo_reps: int
    coverage: dict[str, float]
    band_coverage: float
    alpha: float
    B: int
    dropped: int = 0

    def __post_init__(self):
        vals = list(self.coverage.values()) + [self.band_coverage]
        if any(not 0.0 <= v <= 1.0 for v in vals):
            raise DomainError("coverage fractions must lie in [0, 1]")


def center_residuals(residuals) -> np.ndarray:
    r = np.asarray(residuals, dtype=float).ravel()
    if r.size < 2:
        raise DomainError("need at least two residuals")
    return r - r.mean()


def resample_path(fit: FitResult, seed: int | Sequence[int]) -> TimeSeries:
    """One bootstrap series from ``fit``.

    ``T-1`` centred residuals are drawn with replacement and fed through the
    fitted recursion started at the observed ``y(0)``.
    """
    rng = np.random.default_rng(seed)
    pool = center_residuals(fit.residuals)
    draws = pool[rng.integers(pool.size, size=fit.T - 1)]
    return TimeSeries(simulate_path(fit.coeffs, fit.threshold_path, fit.series[0], draws))


def _order_index(p: float, B: int) -> int:
    # ceil(pB), guarded against representation error, as a 0-based index
    k = math.ceil(p * B - 1e-9)
    return min(max(k, 1), B) - 1


def percentile_interval(draws, alpha: float) -> tuple[float, float]:
    """``[Q(0.5 - 0.5 alpha), Q(0.5 + 0.5 alpha)]`` with ``Q(p)`` the ``ceil(pB)``-th order statistic."""
    x = np.sort(np.asarray(draws, dtype=float).ravel())
    B = x.size
    if B < 20:
        raise DomainError(f"need at least 20 draws, got {B}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must be in (0, 1), got {alpha}")
    return float(x[_order_index(0.5 - 0.5 * alpha, B)]), float(x[_order_index(0.5 + 0.5 * alpha, B)])


def sup_t_band(threshold_paths, gamma_hat_path, level: float = 0.95):
    """Simultaneous band ``gamma_hat(t) -/+ c sd(t)``.

    ``c`` is the ``level`` quantile of ``M_b = max_t |g_b(t) - gbar(t)| / sd(t)``
    where ``gbar`` and ``sd`` (divisor ``B-1``) are taken across replicates.
    ``sd`` is floored at ``1e-10 (1 + |gamma_hat(t)|)``.

    Returns
    -------
    band : ndarray, shape (T, 2)
    c_crit : float
    floored : int
        Number of time points where the floor was applied.
    """
    paths = np.atleast_2d(np.asarray(threshold_paths, dtype=float))
    g_hat = np.asarray(gamma_hat_path, dtype=float).ravel()
    B, T = paths.shape
    if B < 2:
        raise DomainError("need at least two bootstrap paths")
    if g_hat.size != T:
        raise DomainError("gamma_hat path and bootstrap paths differ in length")
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must be in (0, 1), got {level}")
    mean = paths.mean(axis=0)
    sd = paths.std(axis=0, ddof=1)
    floor = 1e-10 * (1.0 + np.abs(g_hat))
    floored = int(np.count_nonzero(sd < floor))
    sd = np.maximum(sd, floor)
    M = np.max(np.abs(paths - mean) / sd, axis=1)
    c = float(np.sort(M)[_order_index(level, B)])
    band = np.column_stack([g_hat - c * sd, g_hat + c * sd])
    return band, c, floored


def _refit(fit: FitResult, b: int, seed) -> FitResult | None:
    yb = resample_path(fit, (seed, b))
    search = fit.search.with_seed(fit.search.seed + b + 1)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            if isinstance(fit.family, ConstantFamily):
                return fit_constant(yb)
            return fit_family(yb, fit.family, search)
    except FitFailed:
        return None


def bootstrap_model(series, fit: FitResult, B: int = 200, alpha: float = 0.95, seed: int = 0) -> BootstrapResult:
    """Residual bootstrap of ``fit``.

    Replicate ``b`` resamples with ``default_rng([seed, b])`` and refits with
    the original search box, its optimiser seed offset by ``b + 1``.
    Failed refits are dropped; more than 10% drops raise
    :class:`BootstrapUnstable`.
    """
    y = as_array(series)
    if y.size != fit.T or not np.array_equal(y, fit.series):
        raise DomainError("fit was not produced from this series")
    if B < 50:
        raise DomainError(f"B must be at least 50, got {B}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must be in (0, 1), got {alpha}")
    est, paths = [], []
    dropped = 0
    for b in range(B):
        r = _refit(fit, b, seed)
        if r is None:
            dropped += 1
            continue
        est.append(r.params())
        paths.append(r.threshold_path)
    if dropped > 0.1 * B:
        raise BootstrapUnstable(f"{dropped} of {B} bootstrap refits failed", dropped, B)
    est = np.array(est)
    paths = np.array(paths)
    intervals = np.array([percentile_interval(est[:, i], alpha) for i in range(est.shape[1])])
    band, c, floored = sup_t_band(paths, fit.threshold_path, alpha)
    return BootstrapResult(
        B=B,
        estimates=est,
        threshold_paths=paths,
        intervals=intervals,
        band=band,
        c_crit=c,
        seed=seed,
        alpha=alpha,
        gamma_hat=np.array(fit.threshold_path),
        dropped=dropped,
        floored=floored,
    )


def _coverage_rep(args):
    model, T, B, alpha, seed, r, basis, J = args
    truth = np.array(model.coeffs.as_tuple() + (model.sigma2,))
    y = simulate(model, T, 0.0, seed=np.random.SeedSequence([seed, r]).generate_state(1)[0])
    fit = fit_wavelet(y, basis, J, SearchSpace(seed=seed + r))
    res = bootstrap_model(y, fit, B, alpha, seed=seed + r)
    inside = (res.intervals[:, 0] <= truth) & (truth <= res.intervals[:, 1])
    g = model.threshold.path(T)
    band_ok = bool(np.all((res.band[:, 0] <= g) & (g <= res.band[:, 1])))
    return inside, band_ok, res.dropped


def coverage_experiment(
    model: SetarModel,
    T: int = 2048,
    mc_reps: int = 200,
    B: int = 200,
    alpha: float = 0.95,
    seed: int = 0,
    basis: WaveletBasis | None = None,
    J: int = 2,
    workers: int = 1,
) -> CoverageReport:
    """Empirical coverage of the bootstrap intervals and band.

    Each Monte Carlo run simulates ``model``, fits the wavelet model at level
    ``J`` (Haar by default), bootstraps it, and checks whether the intervals
    contain the true parameters and the band contains the true threshold path
    at every ``t``. Runs are independent and may be spread over ``workers``
    processes; results are combined in run order.
    """
    if mc_reps < 1:
        raise DomainError(f"mc_reps must be positive, got {mc_reps}")
    basis = basis or make_basis("haar")
    jobs = [(model, T, B, alpha, seed, r, basis, J) for r in range(mc_reps)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            out = list(pool.map(_coverage_rep, jobs))
    else:
        out = [_coverage_rep(j) for j in jobs]
    hits = np.array([o[0] for o in out], dtype=float)
    band = np.array([o[1] for o in out], dtype=float)
    cov = {name: float(hits[:, i].mean()) for i, name in enumerate(PARAM_NAMES)}
    return CoverageReport(
        monte_carlo_reps=mc_reps,
        coverage=cov,
        band_coverage=float(band.mean()),
        alpha=alpha,
        B=B,
        dropped=int(sum(o[2] for o in out)),
    )
