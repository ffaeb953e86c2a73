import numpy as np
import pytest

from tvsetar.errors import DomainError
from tvsetar.studies import STUDIES, replicate_seed, run_study, sim1_model, sim2_model


def test_true_values():
    m1, m2 = sim1_model(), sim2_model()
    assert m1.coeffs.as_tuple() + (m1.sigma2,) == (0.5, -0.3, 1.0, 0.3, 2.0)
    assert m2.coeffs.as_tuple() + (m2.sigma2,) == (0.5, 0.3, -1.0, 0.5, 1.0)


def test_true_threshold_paths():
    T = 2048
    u = np.arange(T) / T
    assert np.array_equal(sim1_model().threshold.path(T), np.where((u >= 0.25) & (u < 0.75), 1.5, 1.0))
    bowl = sim2_model().threshold.path(T)
    assert bowl[0] == 0.0
    assert bowl.min() == pytest.approx(-0.5, abs=1e-6)


def test_replicate_seeds_distinct():
    seeds = {replicate_seed(0, r) for r in range(500)}
    assert len(seeds) == 500
    assert replicate_seed(3, 7) == replicate_seed(3, 7)


def test_single_rep_report():
    rep = run_study("sim1", reps=2, T=512, seed=1)
    assert rep.estimates.shape == (2, 5)
    assert rep.selected_J == (2, 2)
    assert rep.threshold_rmse.shape == (2,)
    tab = rep.table()
    assert [r["parameter"] for r in tab] == ["phi0_low", "phi1_low", "phi0_high", "phi1_high", "sigma2"]
    err = rep.estimates - rep.true
    assert np.allclose(rep.rmse, np.sqrt(np.mean(err**2, axis=0)))
    assert rep.modal_J == 2


def test_study_arguments():
    assert STUDIES == ("sim1", "sim2", "coverage")
    with pytest.raises(DomainError):
        run_study("sim3")
    with pytest.raises(DomainError):
        run_study("sim1", reps=0)


def test_study_is_deterministic():
    a = run_study("sim1", reps=2, T=256, seed=5)
    b = run_study("sim1", reps=2, T=256, seed=5)
    assert a.estimates.tobytes() == b.estimates.tobytes()
