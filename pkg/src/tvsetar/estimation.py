"""Profile conditional least squares for SETAR(1) threshold models.

For a fixed threshold path the model is a linear regression
``y(t) = beta' x(t) + e(t)`` with::

    x(t) = (1, y(t-1), I(t), y(t-1) I(t)),   I(t) = 1{y(t-1) <= gamma(t/T)}
    beta = (phi0_high, phi1_high, phi0_low - phi0_high, phi1_low - phi1_high)

so ``beta`` has a closed form and the threshold parameters are found by
minimising the resulting SSR. Every threshold family used here is linear in
its parameters, ``gamma = G @ theta``, which lets a whole optimiser
population be scored with a handful of matrix products.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Literal, Sequence

import numpy as np
from scipy import optimize

from tvsetar.search import differential_evolution
from tvsetar.errors import DegenerateRegime, DomainError, FitFailed
from tvsetar.threshold_models import (
    ConstantThreshold,
    FourierThreshold,
    RegimeCoefficients,
    SetarModel,
    ThresholdSpec,
    TimeSeries,
    WaveletThreshold,
    as_array,
)
from tvsetar.wavelets import WaveletBasis, WaveletCoefficients, grid_matrix

__all__ = [
    "MIN_REGIME_SIZE",
    "BetaVector",
    "ConstantFamily",
    "FourierFamily",
    "WaveletFamily",
    "SearchSpace",
    "FitResult",
    "design_row",
    "conditional_ls",
    "profile_objective",
    "fit_family",
    "fit_wavelet",
    "fit_fourier",
    "fit_constant",
    "select_resolution",
]

MIN_REGIME_SIZE = 3


@dataclass(frozen=True)
class BetaVector:
    """``(phi0_high, phi1_high, phi0_low - phi0_high, phi1_low - phi1_high)``."""

    b1: float
    b2: float
    b3: float
    b4: float

    @classmethod
    def from_array(cls, b) -> BetaVector:
        b = np.asarray(b, dtype=float).ravel()
        return cls(float(b[0]), float(b[1]), float(b[2]), float(b[3]))

    @classmethod
    def from_coefficients(cls, c: RegimeCoefficients) -> BetaVector:
        return cls(c.phi0_high, c.phi1_high, c.phi0_low - c.phi0_high, c.phi1_low - c.phi1_high)

    def as_array(self) -> np.ndarray:
        return np.array([self.b1, self.b2, self.b3, self.b4])

    def to_coefficients(self) -> RegimeCoefficients:
        return RegimeCoefficients(
            phi0_low=self.b1 + self.b3,
            phi1_low=self.b2 + self.b4,
            phi0_high=self.b1,
            phi1_high=self.b2,
        )


# --- threshold families ----------------------------------------------------


@dataclass(frozen=True)
class ConstantFamily:
    name = "constant"

    @property
    def dim(self) -> int:
        return 1

    def design(self, T: int) -> np.ndarray:
        return np.ones((T, 1))

    def default_bounds(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = _level_bounds(y)
        return np.array([lo]), np.array([hi])

    def to_spec(self, theta) -> ConstantThreshold:
        return ConstantThreshold(float(np.ravel(theta)[0]))


@dataclass(frozen=True)
class FourierFamily:
    k: int = 1
    name = "fourier"

    @property
    def dim(self) -> int:
        return 3

    def design(self, T: int) -> np.ndarray:
        arg = 2.0 * math.pi * self.k * np.arange(T) / T
        return np.column_stack([np.ones(T), np.sin(arg), np.cos(arg)])

    def default_bounds(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = _level_bounds(y)
        r = _span(y)
        return np.array([lo, -r, -r]), np.array([hi, r, r])

    def to_spec(self, theta) -> FourierThreshold:
        g = np.ravel(theta)
        return FourierThreshold(float(g[0]), float(g[1]), float(g[2]), self.k)


@dataclass(frozen=True)
class WaveletFamily:
    basis: WaveletBasis
    J: int
    name = "wavelet"

    @property
    def dim(self) -> int:
        return 2**self.J

    def design(self, T: int) -> np.ndarray:
        return grid_matrix(self.basis, self.J, T)

    def default_bounds(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = _level_bounds(y)
        r = _span(y)
        n = self.dim - 1
        return np.r_[lo, np.full(n, -r)], np.r_[hi, np.full(n, r)]

    def to_spec(self, theta) -> WaveletThreshold:
        return WaveletThreshold(self.basis, WaveletCoefficients.from_vector(theta, self.J))


ThresholdFamily = ConstantFamily | FourierFamily | WaveletFamily


def _span(y: np.ndarray) -> float:
    r = float(np.max(y) - np.min(y))
    return r if r > 0 else 1.0


def _level_bounds(y: np.ndarray) -> tuple[float, float]:
    r = _span(y)
    return float(np.min(y)) - 0.5 * r, float(np.max(y)) + 0.5 * r


# --- search space ----------------------------------------------------------


@dataclass(frozen=True)
class SearchSpace:
    """Box for the threshold parameters plus optimiser settings.

    ``lower``/``upper`` left as ``None`` are filled from the data by
    :meth:`resolve`. ``population`` of ``None`` means ``10 * dim``.
    """

    lower: tuple[float, ...] | None = None
    upper: tuple[float, ...] | None = None
    population: int | None = None
    generations: int = 200
    simplex_iterations: int = 500
    tol: float = 1e-8
    seed: int = 0
    mutation: float = 0.8
    crossover: float = 0.9
    warm_fraction: float = 0.5
    warm_spread: float = 0.02
    polish_sweeps: int = 20

    def __post_init__(self):
        if (self.lower is None) != (self.upper is None):
            raise DomainError("lower and upper bounds must be given together")
        if self.lower is not None:
            lo = tuple(float(x) for x in self.lower)
            hi = tuple(float(x) for x in self.upper)
            if len(lo) != len(hi):
                raise DomainError("bound vectors differ in length")
            if not all(math.isfinite(a) and math.isfinite(b) and a < b for a, b in zip(lo, hi)):
                raise DomainError("each bound pair must be finite with lower < upper")
            object.__setattr__(self, "lower", lo)
            object.__setattr__(self, "upper", hi)
        if self.generations < 0 or self.simplex_iterations < 0:
            raise DomainError("iteration counts must be non-negative")
        if self.population is not None and (self.population < 1 or (self.generations > 0 and self.population < 4)):
            raise DomainError("differential evolution needs a population of at least 4")
        if not (0.0 < self.mutation <= 2.0 and 0.0 <= self.crossover <= 1.0):
            raise DomainError("mutation must be in (0, 2] and crossover in [0, 1]")
        if not (0.0 <= self.warm_fraction <= 1.0 and self.warm_spread > 0.0 and self.polish_sweeps >= 0):
            raise DomainError("warm-start and polish settings out of range")

    def resolve(self, family: ThresholdFamily, y: np.ndarray) -> SearchSpace:
        if self.lower is not None:
            if len(self.lower) != family.dim:
                raise DomainError(f"bounds have {len(self.lower)} entries, family needs {family.dim}")
            out = self
        else:
            lo, hi = family.default_bounds(y)
            out = replace(self, lower=tuple(lo), upper=tuple(hi))
        if out.population is None:
            out = replace(out, population=10 * family.dim)
        return out

    def with_seed(self, seed: int) -> SearchSpace:
        return replace(self, seed=int(seed))

    def unbounded(self) -> SearchSpace:
        """Same settings with the bounds cleared (re-derived per family)."""
        return replace(self, lower=None, upper=None, population=None)

    def bounds(self) -> list[tuple[float, float]]:
        return list(zip(self.lower, self.upper))


# --- regression ------------------------------------------------------------


def design_row(series, t: int, gamma_t: float) -> np.ndarray:
    """Regressor vector ``(1, y(t-1), I, y(t-1) I)`` with ``I = y(t-1) <= gamma_t``."""
    y = as_array(series)
    if not 1 <= t <= y.size - 1:
        raise DomainError(f"t must be in 1..{y.size - 1}, got {t}")
    prev = y[t - 1]
    ind = 1.0 if prev <= gamma_t else 0.0
    return np.array([1.0, prev, ind, prev * ind])


def _design(y: np.ndarray, gamma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    prev = y[:-1]
    ind = (prev <= gamma[1:]).astype(float)
    X = np.column_stack([np.ones_like(prev), prev, ind, prev * ind])
    return X, ind.astype(bool)


def conditional_ls(series, threshold_path) -> tuple[BetaVector, float]:
    """Least-squares ``beta`` and SSR over ``t = 1..T-1`` for a fixed threshold path.

    ``threshold_path`` holds ``gamma(t/T)`` for ``t = 0..T-1`` (entry 0 is unused).
    Raises DegenerateRegime when a regime has fewer than three points or the
    design is rank deficient.
    """
    beta, ssr, _ = _conditional_ls(as_array(series), np.asarray(threshold_path, dtype=float))
    return beta, ssr


def _conditional_ls(y: np.ndarray, gamma: np.ndarray):
    if gamma.shape != y.shape:
        raise DomainError(f"threshold path has length {gamma.size}, series {y.size}")
    X, low = _design(y, gamma)
    n_low = int(low.sum())
    n_high = low.size - n_low
    if n_low < MIN_REGIME_SIZE or n_high < MIN_REGIME_SIZE:
        raise DegenerateRegime(
            f"regime sizes ({n_low}, {n_high}) below {MIN_REGIME_SIZE}", n_low, n_high
        )
    b, _, rank, _ = np.linalg.lstsq(X, y[1:], rcond=None)
    if rank < 4:
        raise DegenerateRegime("regression design is rank deficient", n_low, n_high)
    resid = y[1:] - X @ b
    return BetaVector.from_array(b), float(resid @ resid), resid


class _Profile:
    """Vectorised SSR of the two-regime regression over many threshold vectors.

    The low/high regressions decouple, so each regime's SSR is that of a
    simple linear regression computed from six running sums. When the
    threshold design has few distinct rows (Haar, constant) the low-regime
    sums come from sorted prefix sums within each block instead of a
    full indicator matrix.
    """

    def __init__(self, y: np.ndarray, design: np.ndarray):
        self.y = y
        self.prev = y[:-1]
        self.G = np.ascontiguousarray(design[1:])
        cur = y[1:]
        self.Z = np.column_stack(
            [np.ones_like(cur), self.prev, self.prev**2, cur, self.prev * cur, cur**2]
        )
        self.total = self.Z.sum(axis=0)
        self.penalty = 10.0 * float(cur @ cur)
        self.blocks = None
        rows, inverse = np.unique(self.G, axis=0, return_inverse=True)
        if rows.shape[0] <= max(1, self.prev.size // 8):
            inverse = inverse.reshape(-1)
            self.block_rows = rows
            self.blocks = []
            for b in range(rows.shape[0]):
                idx = np.flatnonzero(inverse == b)
                order = idx[np.argsort(self.prev[idx], kind="stable")]
                csum = np.vstack([np.zeros(6), np.cumsum(self.Z[order], axis=0)])
                self.blocks.append((self.prev[order], csum))

    def __call__(self, theta) -> float:
        return float(self.batch(np.asarray(theta, dtype=float)[None, :])[0])

    def batch(self, thetas: np.ndarray) -> np.ndarray:
        if self.blocks is not None:
            gam = thetas @ self.block_rows.T
            S_low = np.zeros((thetas.shape[0], 6))
            for b, (sorted_prev, csum) in enumerate(self.blocks):
                S_low += csum[np.searchsorted(sorted_prev, gam[:, b], side="right")]
        else:
            gam = thetas @ self.G.T
            low = (self.prev[None, :] <= gam).astype(float)
            S_low = low @ self.Z
        S_high = self.total - S_low
        ssr_low, short_low, bad_low = _regime_ssr(S_low)
        ssr_high, short_high, bad_high = _regime_ssr(S_high)
        out = ssr_low + ssr_high
        bad = bad_low | bad_high
        out[bad] = self.penalty + short_low[bad] + short_high[bad]
        return out

    def line_search(self, x: np.ndarray, i: int, lo: float, hi: float) -> tuple[float, float]:
        """Exact minimiser of the SSR along coordinate ``i`` within ``[lo, hi]``.

        Moving one coordinate flips observations between regimes at known
        breakpoints, so sorting the flips and accumulating their sums gives
        the SSR on every interval at once. Returns the midpoint of the best
        interval (the leftmost on ties) and its SSR.
        """
        g = self.G[:, i]
        rest = self.G @ x - g * x[i]
        moving = g != 0
        fixed_low = self.prev[~moving] <= rest[~moving]
        S = fixed_low.astype(float) @ self.Z[~moving]
        gm = g[moving]
        bp = (self.prev[moving] - rest[moving]) / gm
        up = gm > 0
        Zm = self.Z[moving]
        # up: low for theta >= bp; down: low for theta <= bp
        start_low = np.where(up, lo >= bp, lo <= bp)
        S = S + start_low.astype(float) @ Zm
        inside = (bp > lo) & (bp <= hi)
        order = np.argsort(bp[inside], kind="stable")
        events = bp[inside][order]
        steps = (Zm[inside] * np.where(up[inside], 1.0, -1.0)[:, None])[order]
        S_low = np.vstack([S, S + np.cumsum(steps, axis=0)])
        a, _, bad_a = _regime_ssr(S_low)
        b, _, bad_b = _regime_ssr(self.total - S_low)
        edges = np.r_[lo, events, hi]
        ssr = a + b
        ssr[bad_a | bad_b | (edges[1:] <= edges[:-1])] = np.inf
        k = int(np.argmin(ssr))
        return 0.5 * (edges[k] + edges[k + 1]), float(ssr[k])


def _regime_ssr(S: np.ndarray):
    n, sx, sxx, sy, sxy, syy = S.T
    n = np.rint(n)
    safe = np.maximum(n, 1.0)
    mx, my = sx / safe, sy / safe
    cxx = sxx - n * mx * mx
    cxy = sxy - n * mx * my
    cyy = syy - n * my * my
    shortfall = np.maximum(MIN_REGIME_SIZE - n, 0.0)
    bad = (shortfall > 0) | ~(cxx > 1e-12 * np.maximum(sxx, 1e-300))
    with np.errstate(divide="ignore", invalid="ignore"):
        ssr = np.maximum(cyy - cxy * cxy / cxx, 0.0)
    ssr[bad] = 0.0
    return ssr, shortfall, bad


def profile_objective(series, family: ThresholdFamily, theta) -> float:
    """SSR of the conditional regression at ``theta``; a large finite penalty when degenerate.

    The penalty is ``10 * sum(y(t)**2) + shortfall`` where ``shortfall`` counts
    the points missing from regimes smaller than three.
    """
    y = as_array(series)
    gamma = family.design(y.size) @ np.asarray(theta, dtype=float).ravel()
    try:
        return _conditional_ls(y, gamma)[1]
    except DegenerateRegime as exc:
        cur = y[1:]
        short = max(MIN_REGIME_SIZE - exc.n_low, 0) + max(MIN_REGIME_SIZE - exc.n_high, 0)
        return 10.0 * float(cur @ cur) + short


# --- fit results -----------------------------------------------------------

PARAM_NAMES = ("phi0_low", "phi1_low", "phi0_high", "phi1_high", "sigma2")


@dataclass(frozen=True, eq=False)
class FitResult:
    family: ThresholdFamily
    model: SetarModel
    theta_hat: np.ndarray
    beta_hat: BetaVector
    ssr: float
    sigma2_hat: float
    residuals: np.ndarray
    regime_counts: tuple[int, int]
    threshold_path: np.ndarray
    series: np.ndarray
    search: SearchSpace
    warnings: tuple[str, ...] = ()
    info: dict = field(default_factory=dict)

    @property
    def coeffs(self) -> RegimeCoefficients:
        return self.model.coeffs

    @property
    def threshold(self) -> ThresholdSpec:
        return self.model.threshold

    @property
    def T(self) -> int:
        return self.series.size

    def params(self) -> np.ndarray:
        """``(phi0_low, phi1_low, phi0_high, phi1_high, sigma2)``."""
        return np.array(self.coeffs.as_tuple() + (self.sigma2_hat,))

    @property
    def rmse(self) -> float:
        return math.sqrt(self.ssr / (self.T - 1))


def _finish(y, family, theta, search, info) -> FitResult:
    design = family.design(y.size)
    gamma = design @ theta
    beta, ssr, resid = _conditional_ls(y, gamma)
    coeffs = beta.to_coefficients()
    sigma2 = ssr / (y.size - 1)
    notes = []
    if not coeffs.is_ergodic:
        notes.append("fitted slopes violate the ergodicity conditions")
    low = y[:-1] <= gamma[1:]
    n_low = int(low.sum())
    model = SetarModel(coeffs, family.to_spec(theta), sigma2)
    for w in notes:
        warnings.warn(w, RuntimeWarning, stacklevel=3)
    resid.setflags(write=False)
    gamma.setflags(write=False)
    return FitResult(
        family=family,
        model=model,
        theta_hat=np.array(theta, dtype=float),
        beta_hat=beta,
        ssr=ssr,
        sigma2_hat=sigma2,
        residuals=resid,
        regime_counts=(n_low, low.size - n_low),
        threshold_path=gamma,
        series=np.array(y),
        search=search,
        warnings=tuple(notes),
        info=info,
    )


def _profile_search(y: np.ndarray, family, search: SearchSpace, start=None):
    """Differential evolution, then a bounded simplex, then exact coordinate sweeps.

    When ``start`` is given, a ``warm_fraction`` of the initial population is
    drawn around it (the first member is ``start`` itself).
    """
    prof = _Profile(y, family.design(y.size))
    lo = np.asarray(search.lower)
    hi = np.asarray(search.upper)
    rng = np.random.default_rng(search.seed)
    init = None
    n_warm = int(search.warm_fraction * search.population)
    if start is not None and n_warm > 0:
        start = np.clip(np.asarray(start, dtype=float), lo, hi)
        init = start + search.warm_spread * (hi - lo) * rng.standard_normal((n_warm, lo.size))
        init[0] = start
    de = differential_evolution(
        prof.batch,
        lo,
        hi,
        population=search.population,
        generations=search.generations,
        rng=rng,
        mutation=search.mutation,
        crossover=search.crossover,
        tol=search.tol,
        init=init,
    )
    best, best_val = de.x, de.fun
    if search.simplex_iterations > 0:
        nm = optimize.minimize(
            prof,
            best,
            method="Nelder-Mead",
            bounds=search.bounds(),
            options={
                "maxiter": search.simplex_iterations,
                "fatol": search.tol,
                "xatol": search.tol * float(np.max(hi - lo)),
            },
        )
        if nm.fun < best_val:
            best, best_val = np.clip(nm.x, lo, hi), float(nm.fun)
    for _ in range(search.polish_sweeps):
        improved = False
        for i in range(lo.size):
            xi, _ = prof.line_search(best, i, lo[i], hi[i])
            trial = best.copy()
            trial[i] = xi
            val = prof(trial)
            if val < best_val - search.tol:
                best, best_val, improved = trial, val, True
        if not improved:
            break
    return prof, best, best_val, de


def fit_family(series, family: ThresholdFamily, search: SearchSpace | None = None, start=None) -> FitResult:
    """Profile least-squares fit of a linear threshold family.

    ``start`` seeds part of the optimiser population; by default it is the
    constant-threshold fit expressed in the family's parameters.
    """
    y = as_array(series)
    search = (search or SearchSpace()).resolve(family, y)
    if start is None:
        start = _constant_start(y, family)
    prof, best, best_val, de = _profile_search(y, family, search, start)
    if best_val >= prof.penalty:
        raise FitFailed(
            "no threshold in the search box separates two non-degenerate regimes",
            {"family": family.name, "best_objective": float(best_val), "penalty": prof.penalty},
        )
    # Settle on the exact objective: never worse than any final population member.
    best_exact = profile_objective(y, family, best)
    close = np.flatnonzero(de.energies <= best_val + 1e-8 * (1.0 + abs(best_val)))
    for m in close:
        v = profile_objective(y, family, de.population[m])
        if v < best_exact:
            best, best_exact = de.population[m], v
    info = {
        "population": np.array(de.population),
        "population_ssr": np.array(de.energies),
        "generations": de.generations,
    }
    return _finish(y, family, np.array(best, dtype=float), search, info)


def _constant_start(y: np.ndarray, family) -> np.ndarray | None:
    try:
        gamma = fit_constant(y).theta_hat[0]
    except (FitFailed, DomainError):
        return None
    return _express(family, y.size, np.full(y.size, gamma))


def _express(family, T: int, path: np.ndarray) -> np.ndarray:
    """Least-squares parameters of ``family`` reproducing ``path``."""
    G = family.design(T)
    return np.linalg.lstsq(G, path, rcond=None)[0]


def _check_length(y: np.ndarray, minimum: int, what: str) -> None:
    if y.size < minimum:
        raise DomainError(f"{what} needs T >= {minimum}, got {y.size}")


def fit_wavelet(
    series, basis: WaveletBasis, J: int, search: SearchSpace | None = None, start=None
) -> FitResult:
    """Fit the wavelet-threshold model at resolution ``J``.

    Parameters
    ----------
    series : TimeSeries or array_like
        Observations ``y(0..T-1)``, ``T >= 32``.
    basis : WaveletBasis
    J : int
        Resolution level, ``1 <= J`` and ``2**J <= T/16``.
    search : SearchSpace, optional
        Box and optimiser settings; bounds default to the data-driven box.
    start : array_like, optional
        Warm start for the optimiser (``2**J`` coefficients).
    """
    y = as_array(series)
    _check_length(y, 32, "fit_wavelet")
    if J < 1 or 2**J > y.size / 16:
        raise DomainError(f"resolution J={J} needs 1 <= J and 2**J <= T/16 (T={y.size})")
    fit = fit_family(y, WaveletFamily(basis, J), search, start)
    fit.info["J"] = J
    return fit


def fit_fourier(series, k_candidates: Sequence[int] = (1, 2, 3, 4, 5), search: SearchSpace | None = None) -> FitResult:
    """Fit the Fourier-threshold model for each ``k`` and keep the smallest SSR."""
    y = as_array(series)
    ks = sorted({int(k) for k in k_candidates})
    if not ks:
        raise DomainError("k_candidates must be non-empty")
    _check_length(y, 16, "fit_fourier")
    best = None
    trace = {}
    for k in ks:
        try:
            fit = fit_family(y, FourierFamily(k), search)
        except FitFailed:
            trace[k] = math.inf
            continue
        trace[k] = fit.ssr
        if best is None or fit.ssr < best.ssr:
            best = fit
    if best is None:
        raise FitFailed("every Fourier frequency failed", {"k_candidates": ks})
    best.info.update({"k": best.family.k, "selection": trace})
    return best


def fit_constant(series) -> FitResult:
    """Grid search over observed lagged values between the 15% and 85% quantiles."""
    y = as_array(series)
    _check_length(y, 16, "fit_constant")
    prev = y[:-1]
    lo_q, hi_q = np.quantile(prev, [0.15, 0.85])
    grid = np.unique(prev[(prev >= lo_q) & (prev <= hi_q)])
    family = ConstantFamily()
    prof = _Profile(y, family.design(y.size))
    energies = prof.batch(grid[:, None]) if grid.size else np.array([])
    ok = energies < prof.penalty
    if not ok.any():
        raise FitFailed("no grid threshold yields two non-degenerate regimes", {"grid_size": int(grid.size)})
    i = int(np.flatnonzero(energies == energies[ok].min())[0])
    lo, hi = family.default_bounds(y)
    search = SearchSpace(tuple(lo), tuple(hi), population=1, generations=0, simplex_iterations=0)
    return _finish(y, family, np.array([grid[i]]), search, {"grid": grid, "grid_ssr": energies})


def select_resolution(
    series,
    basis: WaveletBasis,
    J_candidates: Sequence[int] = (2, 3, 4, 5),
    mode: Literal["in_sample", "vs_truth"] = "in_sample",
    gamma_true=None,
    search: SearchSpace | None = None,
) -> tuple[int, FitResult]:
    """Choose ``J`` by threshold RMSE against a known path or by residual RMSE.

    Ties go to the smaller ``J``. The returned fit carries the per-``J`` scores
    in ``fit.info["selection"]``.
    """
    y = as_array(series)
    Js = sorted({int(j) for j in J_candidates})
    if not Js or Js[0] < 1 or Js[-1] > 6:
        raise DomainError("J candidates must be a non-empty subset of 1..6")
    if mode == "vs_truth":
        if gamma_true is None:
            raise DomainError("vs_truth mode needs the true threshold path")
        truth = np.asarray(gamma_true, dtype=float)
        if truth.shape != y.shape:
            raise DomainError("true threshold path must have one value per observation")
    elif mode != "in_sample":
        raise DomainError(f"unknown selection mode {mode!r}")
    # Box dimension changes with J, so bounds are re-derived per candidate.
    base = (search or SearchSpace()).unbounded()
    best_J, best_fit, best_score = None, None, math.inf
    scores = {}
    prev_path = None
    for J in Js:
        # Nested warm start: the coarser fit's path expressed at level J.
        start = None if prev_path is None else _express(WaveletFamily(basis, J), y.size, prev_path)
        fit = fit_wavelet(y, basis, J, base, start)
        prev_path = fit.threshold_path
        if mode == "vs_truth":
            score = float(np.sqrt(np.mean((fit.threshold_path - truth) ** 2)))
        else:
            score = fit.rmse
        scores[J] = {"ssr": fit.ssr, "rmse": score}
        if score < best_score:
            best_J, best_fit, best_score = J, fit, score
    best_fit.info["selection"] = scores
    best_fit.info["selection_mode"] = mode
    best_fit.info["selected_J"] = best_J
    return best_J, best_fit
