import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _oracles import D2_LOW, integer_values_oracle, orthonormality_error
from tvsetar.errors import DomainError, InsufficientResolution, UnsupportedWavelet
from tvsetar.wavelets import (
    Family,
    WaveletCoefficients,
    basis_matrix,
    build_filter_bank,
    eval_father,
    eval_mother,
    eval_scaled,
    eval_threshold_series,
    make_basis,
    project_function,
)

SHIPPED = [("haar", 1)] + [("D", n) for n in range(1, 11)] + [("LA", n) for n in range(4, 11)]
R2 = math.sqrt(2.0)


def step(u):
    u = np.asarray(u, dtype=float)
    return np.where((u >= 0.25) & (u < 0.75), 1.5, 1.0)


# -- filters ---------------------------------------------------------------


@pytest.mark.parametrize("fam,N", SHIPPED)
def test_filter_identities(fam, N):
    fb = build_filter_bank(fam, N)
    lo, hi = np.array(fb.low_pass), np.array(fb.high_pass)
    assert fb.length == 2 * N == lo.size == hi.size
    assert abs(lo.sum() - R2) < 1e-12
    assert abs(hi.sum()) < 1e-12
    assert abs((lo**2).sum() - 1.0) < 1e-12
    L = lo.size
    assert all(hi[k] == (-1) ** k * lo[L - 1 - k] for k in range(L))


def test_haar_filter_values():
    fb = build_filter_bank("haar", 1)
    assert np.allclose(fb.low_pass, [1 / R2, 1 / R2], atol=1e-15)


def test_d2_filter_matches_closed_form_and_qmf():
    fb = build_filter_bank("D", 2)
    assert np.allclose(fb.low_pass, D2_LOW, atol=1e-14)
    l, h = fb.low_pass, fb.high_pass
    assert (h[0], h[1], h[2], h[3]) == (l[3], -l[2], l[1], -l[0])


@pytest.mark.parametrize("fam,N", [("D", 0), ("D", 11), ("LA", 3), ("LA", 11), ("haar", 2), ("coif", 2)])
def test_unsupported_pairs(fam, N):
    with pytest.raises(UnsupportedWavelet):
        build_filter_bank(fam, N)


def test_family_aliases():
    assert Family.parse("db") is Family.D
    assert Family.parse("sym") is Family.LA
    assert Family.parse("Haar") is Family.HAAR


# -- point evaluation ------------------------------------------------------


def test_haar_closed_forms():
    b = make_basis("haar")
    assert eval_father(b, 0.5) == 1.0
    assert eval_father(b, 1.0) == 0.0
    assert eval_father(b, 0.0) == 1.0
    assert eval_father(b, -1e-12) == 0.0
    assert eval_mother(b, 0.25) == 1.0
    assert eval_mother(b, 0.75) == -1.0
    assert eval_mother(b, 0.5) == -1.0
    assert eval_mother(b, 1.0) == 0.0


def test_d1_is_haar():
    d1, haar = make_basis("D", 1), make_basis("haar")
    assert d1.is_haar
    t = np.linspace(-1, 2, 301)
    assert np.array_equal(d1.father(t), haar.father(t))
    assert np.array_equal(d1.mother(t), haar.mother(t))


def test_d2_father_at_integers():
    b = make_basis("D", 2)
    oracle = integer_values_oracle(D2_LOW)
    assert abs(eval_father(b, 1.0) - (1 + math.sqrt(3)) / 2) < 1e-12
    assert abs(eval_father(b, 1.0) - oracle[0]) < 1e-9
    assert abs(eval_father(b, 2.0) - oracle[1]) < 1e-9
    assert eval_father(b, 0.0) == 0.0
    assert eval_father(b, 3.0) == 0.0


@pytest.mark.parametrize("fam,N", [("D", 3), ("D", 6), ("LA", 5), ("LA", 8)])
def test_integer_values_match_oracle(fam, N):
    b = make_basis(fam, N)
    oracle = integer_values_oracle(b.filter.low_pass)
    got = eval_father(b, np.arange(1, 2 * N - 1, dtype=float))
    assert np.max(np.abs(got - oracle)) < 1e-9


@pytest.mark.parametrize("fam,N", [("D", 2), ("D", 4), ("LA", 4)])
def test_dyadic_values_satisfy_refinement(fam, N):
    # phi(x) = sum_k c_k phi(2x - k) holds exactly at dyadic points
    b = make_basis(fam, N)
    c = R2 * np.array(b.filter.low_pass)
    x = np.arange(0, 8 * (2 * N - 1) + 1) / 8.0
    rhs = sum(c[k] * b.father(2 * x - k) for k in range(c.size))
    assert np.max(np.abs(b.father(x) - rhs)) < 1e-10


def test_d2_mother_outside_support():
    assert eval_mother(make_basis("D", 2), 10.0) == 0.0
    b = make_basis("D", 2)
    assert b.mother_support == (-1, 2)
    assert b.father_support == (0, 3)


@pytest.mark.parametrize("fam,N", [("D", 2), ("D", 5), ("LA", 4), ("LA", 7)])
def test_support_is_respected(fam, N):
    b = make_basis(fam, N)
    t = np.concatenate([np.linspace(-3 * N, 0, 50), np.linspace(2 * N - 1, 5 * N, 50)])
    assert np.all(b.father(t) == 0.0)
    t = np.concatenate([np.linspace(-3 * N, 1 - N, 50), np.linspace(N, 5 * N, 50)])
    assert np.all(b.mother(t) == 0.0)


@pytest.mark.parametrize("fam,N", [("D", 2), ("D", 7), ("LA", 4), ("LA", 10)])
def test_two_scale_consistency(fam, N):
    b = make_basis(fam, N)
    h = np.array(b.filter.high_pass)
    L = h.size
    t = np.linspace(1 - N, N, 2001)
    rhs = R2 * sum(h[k] * b.father(2 * t - k + L - 2) for k in range(L))
    assert np.max(np.abs(b.mother(t) - rhs)) < 1e-10


def test_eval_scaled_examples():
    haar = make_basis("haar")
    assert eval_scaled(haar, 1, 0, 0.1, "mother") == pytest.approx(R2, abs=1e-15)
    assert eval_scaled(haar, 1, 1, 0.1, "mother") == 0.0
    b = make_basis("LA", 4)
    t = np.linspace(-4, 8, 97)
    assert np.array_equal(eval_scaled(b, 0, 0, t, "father"), b.father(t))
    assert np.array_equal(eval_scaled(b, 0, 0, t, "mother"), b.mother(t))
    with pytest.raises(DomainError):
        eval_scaled(b, -1, 0, 0.5)


@pytest.mark.parametrize("fam,N", SHIPPED)
def test_partition_of_unity(fam, N):
    b = make_basis(fam, N)
    x = np.linspace(0.0, 1.0, 10_000, endpoint=False)
    total = sum(b.father(x - k) for k in range(-(2 * N), 2 * N + 1))
    assert np.max(np.abs(total - 1.0)) < 1e-6


@pytest.mark.parametrize("fam,N", [("haar", 1), ("D", 2), ("D", 4), ("LA", 4)])
def test_orthonormality(fam, N):
    err = orthonormality_error(make_basis(fam, N))
    assert err < (1e-14 if fam == "haar" else 1e-4)


@given(st.floats(-20, 20, allow_nan=False))
def test_father_total_function(t):
    b = make_basis("D", 3)
    v = eval_father(b, t)
    assert math.isfinite(v)
    if t <= 0 or t >= 5:
        assert v == 0.0


# -- series on [0, 1) ------------------------------------------------------


def test_haar_series_examples():
    haar = make_basis("haar")
    c = WaveletCoefficients(1, 1.0, (0.5,))
    assert eval_threshold_series(haar, c, 0.3) == pytest.approx(1.5, abs=1e-15)
    assert eval_threshold_series(haar, c, 0.7) == pytest.approx(0.5, abs=1e-15)


def test_haar_step_representation():
    haar = make_basis("haar")
    q = 0.125 * R2
    c = WaveletCoefficients(2, 1.25, (0.0, -q, q))
    got = eval_threshold_series(haar, c, np.array([0.1, 0.3, 0.6, 0.9]))
    assert np.max(np.abs(got - [1.0, 1.5, 1.5, 1.0])) < 1e-12


@pytest.mark.parametrize("fam,N", [("haar", 1), ("D", 3), ("LA", 4)])
def test_zero_coefficients_give_zero(fam, N):
    b = make_basis(fam, N)
    u = np.linspace(0, 1, 50, endpoint=False)
    assert np.all(eval_threshold_series(b, WaveletCoefficients.zeros(3), u) == 0.0)


@pytest.mark.parametrize("u", [-0.1, 1.0, 1.5, float("nan")])
def test_series_domain(u):
    with pytest.raises(DomainError):
        eval_threshold_series(make_basis("haar"), WaveletCoefficients.zeros(1), u)


@given(
    st.lists(st.floats(-5, 5), min_size=8, max_size=8),
    st.lists(st.floats(-5, 5), min_size=8, max_size=8),
    st.floats(-3, 3),
    st.floats(-3, 3),
)
def test_series_is_linear(t1, t2, a, b):
    basis = make_basis("LA", 4)
    u = np.linspace(0, 1, 33, endpoint=False)
    c1 = WaveletCoefficients.from_vector(t1, 3)
    c2 = WaveletCoefficients.from_vector(t2, 3)
    c12 = WaveletCoefficients.from_vector(a * np.array(t1) + b * np.array(t2), 3)
    lhs = eval_threshold_series(basis, c12, u)
    rhs = a * eval_threshold_series(basis, c1, u) + b * eval_threshold_series(basis, c2, u)
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * (1 + np.max(np.abs(rhs)))


@pytest.mark.parametrize("fam,N", [("D", 2), ("LA", 4), ("D", 8)])
def test_periodic_fold_reproduces_constants(fam, N):
    b = make_basis(fam, N)
    u = np.linspace(0, 1, 257, endpoint=False)
    B = basis_matrix(b, 3, u)
    # father column is the constant 1
    assert np.max(np.abs(B[:, 0] - 1.0)) < 1e-9


def test_reflect_boundary_option():
    per = make_basis("LA", 4)
    ref = make_basis("LA", 4, boundary="reflect")
    u = np.linspace(0, 1, 64, endpoint=False)
    j, k = 1, 0
    want = ref.scaled(j, k, u, "mother") + ref.scaled(j, k, -u, "mother") + ref.scaled(j, k, 2 - u, "mother")
    assert np.allclose(basis_matrix(ref, 2, u)[:, 2], want, atol=1e-15)
    assert not np.allclose(basis_matrix(per, 2, u), basis_matrix(ref, 2, u))
    with pytest.raises(DomainError):
        make_basis("LA", 4, boundary="wrap")


# -- projection ------------------------------------------------------------


def test_project_constant_haar():
    c = project_function(make_basis("haar"), 2, np.ones(64))
    assert c.c00 == pytest.approx(1.0, abs=1e-15)
    assert all(abs(d) < 1e-15 for d in c.d)


def test_project_step_haar():
    u = np.arange(256) / 256
    c = project_function(make_basis("haar"), 2, step(u))
    q = 0.125 * R2
    assert np.max(np.abs(c.as_vector() - [1.25, 0.0, -q, q])) < 1e-12


def test_project_mother_haar():
    u = np.arange(64) / 64
    c = project_function(make_basis("haar"), 1, np.where(u < 0.5, 1.0, -1.0))
    assert c.c00 == pytest.approx(0.0, abs=1e-15)
    assert c.d[0] == pytest.approx(1.0, abs=1e-15)


def test_project_needs_fine_grid():
    with pytest.raises(InsufficientResolution):
        project_function(make_basis("haar"), 3, np.ones(64))


@pytest.mark.parametrize("fam,N,tol", [("haar", 1, 1e-12), ("D", 3, 1e-3), ("LA", 4, 1e-3)])
def test_projection_round_trip(fam, N, tol):
    b = make_basis(fam, N)
    rng = np.random.default_rng(4)
    theta = rng.normal(size=8)
    u = np.arange(512) / 512
    f = eval_threshold_series(b, WaveletCoefficients.from_vector(theta, 3), u)
    c = project_function(b, 3, f)
    back = eval_threshold_series(b, c, u)
    assert np.max(np.abs(back - f)) < tol


def test_coefficient_layout():
    c = WaveletCoefficients.from_vector(np.arange(8.0), 3)
    assert len(c) == 8 and c.c00 == 0.0
    assert c.detail(0, 0) == 1.0
    assert c.detail(1, 1) == 3.0
    assert c.detail(2, 3) == 7.0
    with pytest.raises(DomainError):
        WaveletCoefficients(2, 1.0, (0.0, 0.0))
    with pytest.raises(DomainError):
        WaveletCoefficients(1, float("inf"), (0.0,))
