"""Population search used for the outer threshold minimisation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass
class DEResult:
    x: np.ndarray
    fun: float
    population: np.ndarray
    energies: np.ndarray
    generations: int


def differential_evolution(
    func: Callable[[np.ndarray], np.ndarray],
    lower,
    upper,
    population: int,
    generations: int,
    rng: np.random.Generator,
    mutation: float = 0.8,
    crossover: float = 0.9,
    tol: float = 0.0,
    init: np.ndarray | None = None,
) -> DEResult:
    """DE/rand/1/bin with synchronous (per-generation) replacement.

    ``func`` maps a ``(P, d)`` array of candidates to ``P`` objective values.
    A trial replaces its target when it is no worse, so the population can
    drift across the flat steps of an indicator-driven objective. Mutant
    components that leave the box are redrawn uniformly inside it. The loop
    stops early once ``std(energies) <= tol * |mean(energies)|``. Rows of
    ``init`` replace the leading members of the uniform initial population.
    """
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    d = lo.size
    P = max(int(population), 4)
    width = hi - lo
    pop = lo + rng.random((P, d)) * width
    if init is not None:
        init = np.clip(np.atleast_2d(np.asarray(init, dtype=float)), lo, hi)[:P]
        pop[: init.shape[0]] = init
    energies = np.asarray(func(pop), dtype=float)
    rows = np.arange(P)
    gen = 0
    for gen in range(1, generations + 1):
        keys = rng.random((P, P))
        keys[rows, rows] = np.inf
        pick = np.argpartition(keys, 3, axis=1)[:, :3]
        mutant = pop[pick[:, 0]] + mutation * (pop[pick[:, 1]] - pop[pick[:, 2]])
        cross = rng.random((P, d)) < crossover
        cross[rows, rng.integers(d, size=P)] = True
        trial = np.where(cross, mutant, pop)
        out = (trial < lo) | (trial > hi)
        if out.any():
            fresh = lo + rng.random((P, d)) * width
            trial = np.where(out, fresh, trial)
        e_trial = np.asarray(func(trial), dtype=float)
        keep = e_trial <= energies
        pop[keep] = trial[keep]
        energies[keep] = e_trial[keep]
        if tol > 0 and np.std(energies) <= tol * abs(np.mean(energies)):
            break
    best = int(np.argmin(energies))
    return DEResult(pop[best].copy(), float(energies[best]), pop, energies, gen)
