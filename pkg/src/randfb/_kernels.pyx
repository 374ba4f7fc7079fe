# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled direct-sum kernels.

Same signatures and semantics as :mod:`randfb._kernels_py`. Inputs are
expected to be C-contiguous float64; :mod:`randfb.kernels` takes care of that.
"""

import numpy as np


def autocorr(const double[::1] x, Py_ssize_t L):
    cdef Py_ssize_t N = x.shape[0]
    cdef Py_ssize_t t, k
    cdef double acc
    out = np.empty(L, dtype=np.float64)
    cdef double[::1] r = out
    for t in range(L):
        acc = 0.0
        # x[(k - t) mod N] without a modulo in the inner loop
        for k in range(t, N):
            acc += x[k] * x[k - t]
        for k in range(t):
            acc += x[k] * x[k - t + N]
        r[t] = acc
    return out


def circular_convolve(const double[::1] x, const double[::1] w):
    cdef Py_ssize_t N = x.shape[0]
    cdef Py_ssize_t T = w.shape[0]
    cdef Py_ssize_t n, k
    cdef double wk
    out = np.zeros(N, dtype=np.float64)
    cdef double[::1] y = out
    for k in range(T):
        wk = w[k]
        for n in range(k, N):
            y[n] += wk * x[n - k]
        for n in range(k):
            y[n] += wk * x[n - k + N]
    return out


def toeplitz_matvec(const double[::1] r, const double[::1] v):
    """y[n] = sum_t r[|t - n|] v[t] for a symmetric Toeplitz matrix given by its first row."""
    cdef Py_ssize_t T = v.shape[0]
    cdef Py_ssize_t n, t
    cdef double acc
    out = np.empty(T, dtype=np.float64)
    cdef double[::1] y = out
    for n in range(T):
        acc = 0.0
        for t in range(n):
            acc += r[n - t] * v[t]
        for t in range(n, T):
            acc += r[t - n] * v[t]
        y[n] = acc
    return out
