import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from randfb import kernels

from .oracles import autocorr_loop, convolve_loop

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_backend_is_named():
    assert kernels.BACKEND in ("cython", "python")


@given(x=arrays(np.float64, st.integers(1, 40), elements=finite), data=st.data())
@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_autocorr_matches_loop(backend, x, data):
    L = data.draw(st.integers(1, len(x)))
    np.testing.assert_allclose(backend.autocorr(x, L), autocorr_loop(x, L), rtol=0, atol=1e-9)


@given(x=arrays(np.float64, st.integers(1, 40), elements=finite), data=st.data())
@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_convolve_matches_loop(backend, x, data):
    T = data.draw(st.integers(1, len(x)))
    w = data.draw(arrays(np.float64, T, elements=finite))
    np.testing.assert_allclose(backend.circular_convolve(x, w), convolve_loop(x, w), rtol=0, atol=1e-9)


def test_toeplitz_matvec(backend):
    rng = np.random.default_rng(0)
    r, v = rng.standard_normal(9), rng.standard_normal(9)
    idx = np.abs(np.subtract.outer(np.arange(9), np.arange(9)))
    np.testing.assert_allclose(backend.toeplitz_matvec(r, v), r[idx] @ v, atol=1e-12)


def test_backends_agree_on_long_input():
    from randfb import _kernels_py

    try:
        from randfb import _kernels
    except ImportError:
        pytest.skip("extension not built")
    x = np.random.default_rng(1).standard_normal(5000)
    np.testing.assert_allclose(_kernels.autocorr(x, 200), _kernels_py.autocorr(x, 200), atol=1e-10)
