"""Monte Carlo replication studies for the two benchmark models.

``sim1`` has a two-level step threshold that the Haar series at ``J = 2``
represents exactly. ``sim2`` has a smooth U-shaped threshold fitted with the
LA(4) basis, choosing ``J`` per replicate by distance to the true path.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from tvsetar.bootstrap import CoverageReport, coverage_experiment
from tvsetar.errors import DomainError
from tvsetar.estimation import PARAM_NAMES, SearchSpace, fit_wavelet, select_resolution
from tvsetar.threshold_models import FunctionThreshold, RegimeCoefficients, SetarModel, simulate
from tvsetar.wavelets import make_basis

__all__ = ["StudyReport", "sim1_model", "sim2_model", "run_study", "STUDIES", "replicate_seed"]


def _step(u):
    u = np.asarray(u, dtype=float)
    return np.where((u >= 0.25) & (u < 0.75), 1.5, 1.0)


def _bowl(u):
    u = np.asarray(u, dtype=float)
    return -0.5 + 0.5 * (2.0 * u - 1.0) ** 2


def sim1_model() -> SetarModel:
    return SetarModel(RegimeCoefficients(0.5, -0.3, 1.0, 0.3), FunctionThreshold(_step, "step"), 2.0)


def sim2_model() -> SetarModel:
    return SetarModel(RegimeCoefficients(0.5, 0.3, -1.0, 0.5), FunctionThreshold(_bowl, "bowl"), 1.0)


STUDIES = ("sim1", "sim2", "coverage")


@dataclass(frozen=True, eq=False)
class StudyReport:
    """Table-shaped summary: true value, mean estimate and RMSE per parameter."""

    study: str
    reps: int
    T: int
    seed: int
    true: np.ndarray
    estimates: np.ndarray
    selected_J: tuple[int, ...] = ()
    threshold_rmse: np.ndarray | None = None
    coverage: CoverageReport | None = None
    extra: dict = field(default_factory=dict)

    @property
    def mean(self) -> np.ndarray:
        return self.estimates.mean(axis=0)

    @property
    def rmse(self) -> np.ndarray:
        return np.sqrt(np.mean((self.estimates - self.true) ** 2, axis=0))

    @property
    def modal_J(self) -> int | None:
        if not self.selected_J:
            return None
        vals, counts = np.unique(self.selected_J, return_counts=True)
        return int(vals[np.argmax(counts)])

    def table(self) -> list[dict]:
        return [
            {"parameter": n, "true": float(t), "estimate": float(m), "rmse": float(r)}
            for n, t, m, r in zip(PARAM_NAMES, self.true, self.mean, self.rmse)
        ]


def replicate_seed(seed: int, r: int) -> int:
    """Simulation seed of replicate ``r``."""
    return int(np.random.SeedSequence([seed, r]).generate_state(1)[0])


def _sim1_rep(args):
    r, T, seed = args
    y = simulate(sim1_model(), T, 0.0, seed=replicate_seed(seed, r))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        fit = fit_wavelet(y, make_basis("haar"), 2, SearchSpace(seed=seed + r))
    return fit.params(), 2, np.sqrt(np.mean((fit.threshold_path - _step(np.arange(T) / T)) ** 2))


def _sim2_rep(args):
    r, T, seed = args
    truth = _bowl(np.arange(T) / T)
    y = simulate(sim2_model(), T, 0.0, seed=replicate_seed(seed, r))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        J, fit = select_resolution(
            y, make_basis("LA", 4), (2, 3, 4, 5), "vs_truth", truth, SearchSpace(seed=seed + r)
        )
    return fit.params(), J, fit.info["selection"][J]["rmse"]


def _run(worker, reps, T, seed, workers):
    jobs = [(r, T, seed) for r in range(reps)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(worker, jobs))
    return [worker(j) for j in jobs]


def run_study(
    study: str,
    reps: int | None = None,
    T: int = 2048,
    seed: int = 0,
    B: int = 200,
    alpha: float = 0.95,
    workers: int = 1,
) -> StudyReport:
    """Run ``sim1``, ``sim2`` or ``coverage``.

    ``reps`` defaults to 100 for the estimation studies and 200 Monte Carlo
    runs for ``coverage``.
    """
    if study not in STUDIES:
        raise DomainError(f"unknown study {study!r}; choose from {STUDIES}")
    if reps is not None and reps < 1:
        raise DomainError(f"reps must be positive, got {reps}")
    if study == "coverage":
        reps = 200 if reps is None else reps
        m = sim1_model()
        cov = coverage_experiment(m, T, reps, B, alpha, seed, make_basis("haar"), 2, workers)
        true = np.array(m.coeffs.as_tuple() + (m.sigma2,))
        return StudyReport(study, reps, T, seed, true, np.empty((0, 5)), coverage=cov)
    reps = 100 if reps is None else reps
    model = sim1_model() if study == "sim1" else sim2_model()
    out = _run(_sim1_rep if study == "sim1" else _sim2_rep, reps, T, seed, workers)
    return StudyReport(
        study,
        reps,
        T,
        seed,
        np.array(model.coeffs.as_tuple() + (model.sigma2,)),
        np.array([o[0] for o in out]),
        tuple(int(o[1]) for o in out),
        np.array([o[2] for o in out]),
    )
