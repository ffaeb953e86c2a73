"""Two-regime SETAR(1) models with constant or time-varying thresholds.

The regime at time ``t`` is *low* when ``y(t-1) <= gamma(t/T)`` and *high*
otherwise::

    y(t) = phi0_low  + phi1_low  * y(t-1) + e(t)    if y(t-1) <= gamma(t/T)
    y(t) = phi0_high + phi1_high * y(t-1) + e(t)    otherwise

``y(0)`` is an initial datum and the recursion runs for ``t = 1..T-1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from tvsetar.errors import DomainError, InvalidVariance, NonergodicModel
from tvsetar.wavelets import WaveletBasis, WaveletCoefficients, basis_matrix, grid_matrix

__all__ = [
    "RegimeCoefficients",
    "ConstantThreshold",
    "FourierThreshold",
    "WaveletThreshold",
    "FunctionThreshold",
    "ThresholdSpec",
    "SetarModel",
    "TimeSeries",
    "eval_threshold",
    "threshold_path",
    "simulate",
    "simulate_path",
    "draw_innovations",
    "regime_path",
]


@dataclass(frozen=True)
class RegimeCoefficients:
    phi0_low: float
    phi1_low: float
    phi0_high: float
    phi1_high: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.phi0_low, self.phi1_low, self.phi0_high, self.phi1_high)

    @property
    def is_ergodic(self) -> bool:
        a, b = self.phi1_low, self.phi1_high
        return a < 1.0 and b < 1.0 and a * b < 1.0

    def check_ergodic(self) -> None:
        if not self.is_ergodic:
            raise NonergodicModel(
                f"slopes ({self.phi1_low}, {self.phi1_high}) violate the ergodicity conditions"
            )


@dataclass(frozen=True)
class ConstantThreshold:
    gamma: float

    def path(self, T: int) -> np.ndarray:
        return np.full(T, float(self.gamma))

    def __call__(self, u):
        return np.full(np.shape(u), float(self.gamma)) if np.ndim(u) else float(self.gamma)


@dataclass(frozen=True)
class FourierThreshold:
    """``gamma0 + gamma1 sin(2 pi k u) + gamma2 cos(2 pi k u)``."""

    gamma0: float
    gamma1: float
    gamma2: float
    k: int = 1

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"Fourier frequency k must be a positive integer, got {self.k}")

    def __call__(self, u):
        arg = 2.0 * math.pi * self.k * np.asarray(u, dtype=float)
        out = self.gamma0 + self.gamma1 * np.sin(arg) + self.gamma2 * np.cos(arg)
        return float(out) if np.ndim(out) == 0 else out

    def path(self, T: int) -> np.ndarray:
        return self(np.arange(T) / T)


@dataclass(frozen=True)
class WaveletThreshold:
    basis: WaveletBasis
    coeffs: WaveletCoefficients

    def __call__(self, u):
        vals = basis_matrix(self.basis, self.coeffs.J, u) @ self.coeffs.as_vector()
        return float(vals[0]) if np.ndim(u) == 0 else vals.reshape(np.shape(u))

    def path(self, T: int) -> np.ndarray:
        return grid_matrix(self.basis, self.coeffs.J, T) @ self.coeffs.as_vector()


@dataclass(frozen=True)
class FunctionThreshold:
    """Arbitrary threshold ``func(u)``; used for true paths in simulation studies."""

    func: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    label: str = "function"

    def __call__(self, u):
        out = np.asarray(self.func(np.asarray(u, dtype=float)), dtype=float)
        return float(out) if out.ndim == 0 else out

    def path(self, T: int) -> np.ndarray:
        return np.broadcast_to(self(np.arange(T) / T), (T,)).astype(float)


ThresholdSpec = Union[ConstantThreshold, FourierThreshold, WaveletThreshold, FunctionThreshold]


@dataclass(frozen=True)
class SetarModel:
    coeffs: RegimeCoefficients
    threshold: ThresholdSpec
    sigma2: float = 1.0
    noise: str = "gaussian"

    def __post_init__(self):
        if not (self.sigma2 >= 0.0) or not math.isfinite(self.sigma2):
            raise InvalidVariance(f"innovation variance must be finite and >= 0, got {self.sigma2}")
        if self.noise != "gaussian":
            raise DomainError(f"unsupported noise family {self.noise!r}")


@dataclass(frozen=True, eq=False)
class TimeSeries:
    values: np.ndarray
    timestamps: tuple | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size < 2:
            raise DomainError(f"a series needs at least 2 observations, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise DomainError("series contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.timestamps is not None:
            ts = tuple(self.timestamps)
            if len(ts) != v.size:
                raise DomainError("timestamps and values differ in length")
            object.__setattr__(self, "timestamps", ts)

    @property
    def T(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return np.array_equal(self.values, other.values) and self.timestamps == other.timestamps


def as_array(series) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    return np.asarray(series, dtype=float).ravel()


def eval_threshold(spec: ThresholdSpec, t: int, T: int) -> float:
    """Threshold at time ``t`` of a length-``T`` sample, i.e. ``gamma(t/T)``."""
    if not 0 <= t < T:
        raise DomainError(f"time index {t} outside 0..{T - 1}")
    if isinstance(spec, ConstantThreshold):
        return float(spec.gamma)
    return float(spec(t / T))


def threshold_path(spec: ThresholdSpec, T: int) -> np.ndarray:
    """``gamma(t/T)`` for ``t = 0..T-1``."""
    return np.asarray(spec.path(T), dtype=float)


def draw_innovations(sigma2: float, n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.normal(0.0, math.sqrt(sigma2), size=n)


def simulate_path(
    coeffs: RegimeCoefficients, gamma: np.ndarray, y0: float, innovations: np.ndarray
) -> np.ndarray:
    """Run the recursion for ``t = 1..T-1`` given the threshold path and innovations.

    ``gamma`` has length ``T`` (entry 0 unused), ``innovations`` length ``T-1``.
    """
    T = len(gamma)
    a0, a1, b0, b1 = coeffs.as_tuple()
    y = np.empty(T)
    y[0] = y0
    g = np.asarray(gamma, dtype=float).tolist()
    e = np.asarray(innovations, dtype=float).tolist()
    prev = float(y0)
    for t in range(1, T):
        if prev <= g[t]:
            prev = a0 + a1 * prev + e[t - 1]
        else:
            prev = b0 + b1 * prev + e[t - 1]
        y[t] = prev
    return y


def simulate(
    model: SetarModel, T: int, y0: float = 0.0, seed: int = 0, burn_in: int = 0
) -> TimeSeries:
    """Simulate ``T`` observations with Gaussian innovations.

    With ``burn_in > 0`` that many extra steps are run first with the clock
    held at ``t = 0``; the last of them becomes ``y(0)``.
    """
    if T < 2:
        raise DomainError(f"T must be at least 2, got {T}")
    model.coeffs.check_ergodic()
    rng = np.random.default_rng(seed)
    gamma = threshold_path(model.threshold, T)
    start = float(y0)
    if burn_in > 0:
        warm = draw_innovations(model.sigma2, burn_in, rng)
        start = simulate_path(model.coeffs, np.full(burn_in + 1, gamma[0]), start, warm)[-1]
    eps = draw_innovations(model.sigma2, T - 1, rng)
    return TimeSeries(simulate_path(model.coeffs, gamma, start, eps))


def regime_path(model_or_threshold, series) -> np.ndarray:
    """Boolean array over ``t = 1..T-1``: True where the low regime applies."""
    y = as_array(series)
    if y.size < 2:
        raise DomainError("need at least two observations")
    spec = model_or_threshold.threshold if isinstance(model_or_threshold, SetarModel) else model_or_threshold
    if isinstance(spec, np.ndarray):
        gamma = spec
    else:
        gamma = threshold_path(spec, y.size)
    return y[:-1] <= gamma[1:]
