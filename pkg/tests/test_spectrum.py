import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randfb.errors import ConvergenceError, DegenerateSignalError, InvalidLengthError
from randfb.signals import Signal, gen_brownian, gen_constant, gen_impulse, gen_sine
from randfb.spectrum import (
    QMatrix,
    dft_spectral_stats,
    q_matrix,
    quadratic_energy,
    spectral_stats,
    toeplitz_apply,
)

from .oracles import conv_matrix, convolve_loop, jacobi_eigenvalues


def test_q_matrix_examples():
    np.testing.assert_array_equal(q_matrix(gen_impulse(16), 3).entries, np.eye(3))
    np.testing.assert_allclose(q_matrix(gen_constant(4), 3).entries, np.ones((3, 3)), atol=1e-15)
    with pytest.raises(InvalidLengthError):
        q_matrix(gen_impulse(4), 5)


def test_q_matrix_equals_dense_gram_of_convolution_matrix():
    x = gen_brownian(64, 7)
    C = conv_matrix(x.samples, 8)
    np.testing.assert_allclose(q_matrix(x, 8).entries, C.T @ C, rtol=0, atol=1e-12)


def test_q_matrix_structure():
    x = gen_brownian(50, 2)
    Q = q_matrix(x, 12)
    A = Q.entries
    np.testing.assert_array_equal(A, A.T)
    np.testing.assert_allclose(np.diag(A), x.energy, rtol=1e-12)
    for d in range(1, 12):
        assert np.ptp(np.diagonal(A, d)) == 0.0
    assert jacobi_eigenvalues(A)[0] > -1e-12
    np.testing.assert_allclose(toeplitz_apply(Q, np.arange(12.0)), A @ np.arange(12.0), atol=1e-12)


def test_quadratic_energy_examples():
    rng = np.random.default_rng(11)
    w = rng.standard_normal(5)
    assert math.isclose(quadratic_energy(gen_impulse(32), w), float(w @ w), rel_tol=1e-12)
    x = Signal(rng.standard_normal(32))
    assert math.isclose(quadratic_energy(x, [1.0]), x.energy, rel_tol=1e-12)
    y = convolve_loop(x.samples, w)
    assert math.isclose(quadratic_energy(x, w), float(y @ y), rel_tol=1e-12)
    with pytest.raises(InvalidLengthError):
        quadratic_energy(x, np.ones(33))


@given(seed=st.integers(0, 2**32 - 1), N=st.integers(1, 40), data=st.data())
@settings(max_examples=80, deadline=None)
def test_quadratic_form_identity(seed, N, data):
    T = data.draw(st.integers(1, N))
    rng = np.random.default_rng(seed)
    x = Signal(rng.standard_normal(N))
    w = rng.standard_normal(T)
    y = convolve_loop(x.samples, w)
    assert math.isclose(quadratic_energy(x, w), float(y @ y), rel_tol=1e-10, abs_tol=1e-12)
    Q = q_matrix(x, T)
    assert math.isclose(np.trace(Q.entries), T * x.energy, rel_tol=1e-12)


def test_spectral_stats_trivial():
    s = spectral_stats(q_matrix(gen_impulse(8), 3))
    assert (s.lambda_inf, s.lambda_2_sq, s.trace) == pytest.approx((1.0, 3.0, 3.0), rel=1e-12)
    s = spectral_stats(q_matrix(gen_constant(16), 5))
    assert (s.lambda_inf, s.lambda_2_sq, s.trace) == pytest.approx((5.0, 25.0, 5.0), rel=1e-10)


def test_spectral_stats_against_jacobi():
    Q = q_matrix(gen_brownian(64, 7), 8)
    lam = jacobi_eigenvalues(Q.entries)
    s = spectral_stats(Q)
    assert math.isclose(s.lambda_inf, lam[-1], rel_tol=1e-8)
    assert math.isclose(s.lambda_2_sq, float(np.sum(lam**2)), rel_tol=1e-10)
    assert math.isclose(s.trace, 8 * Q.source_energy, rel_tol=1e-10)


@pytest.mark.parametrize("T", [1, 2, 5, 9, 16])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_frobenius_matches_eigenvalue_sum(T, seed):
    rng = np.random.default_rng(seed)
    x = Signal(rng.standard_normal(20) + np.sin(np.arange(20)))
    Q = q_matrix(x, T)
    lam = jacobi_eigenvalues(Q.entries)
    s = spectral_stats(Q)
    assert math.isclose(s.lambda_2_sq, float(np.sum(lam**2)), rel_tol=1e-10)
    assert math.isclose(s.lambda_inf, lam[-1], rel_tol=1e-8)
    assert s.lambda_inf**2 <= s.lambda_2_sq * (1 + 1e-12)
    assert s.lambda_2_sq <= s.lambda_inf * s.trace * (1 + 1e-10)


@pytest.mark.parametrize(
    "x",
    [gen_brownian(64, 7), gen_sine(32, 1), gen_sine(32, 8), gen_impulse(16), gen_constant(12), Signal(np.arange(10.0) - 3)],
    ids=lambda x: getattr(x, "name", "") or "ramp",
)
def test_full_length_eigenvalues_are_power_spectrum(x):
    s = spectral_stats(q_matrix(x, x.N))
    d = dft_spectral_stats(x)
    p = np.abs(np.fft.fft(x.samples)) ** 2
    assert math.isclose(s.lambda_inf, p.max(), rel_tol=1e-8)
    assert math.isclose(s.lambda_2_sq, float(np.sum(p**2)), rel_tol=1e-10)
    assert math.isclose(d.lambda_inf, p.max(), rel_tol=1e-12)


def test_skew_symmetric_top_eigenvector_is_found():
    # ones is an exact (non-top) eigenvector of this circulant Q
    x = Signal(np.arange(10.0) - 3)
    lam = jacobi_eigenvalues(q_matrix(x, 10).entries)
    assert math.isclose(spectral_stats(q_matrix(x, 10)).lambda_inf, lam[-1], rel_tol=1e-8)


def test_start_vector_orthogonal_to_top_eigenspace_is_recovered():
    # (0, 1, 0, -1): Q_4 annihilates the all-ones start vector
    x = gen_sine(4, 1)
    s = spectral_stats(q_matrix(x, 4))
    assert math.isclose(s.lambda_inf, 2.0, rel_tol=1e-10)


def test_convergence_error_carries_estimate():
    Q = q_matrix(gen_brownian(64, 3), 16)
    with pytest.raises(ConvergenceError) as info:
        spectral_stats(Q, tol=1e-300, max_iter=3)
    assert info.value.estimate > 0
    assert info.value.estimate <= jacobi_eigenvalues(Q.entries)[-1] * (1 + 1e-12)


def test_zero_matrix_rejected():
    with pytest.raises(DegenerateSignalError):
        spectral_stats(QMatrix(np.zeros((3, 3)), 0.0))
