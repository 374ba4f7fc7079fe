"""Pure numpy implementations of the direct-sum kernels.

Used when the compiled extension is not available (or RANDFB_PURE_PYTHON is
set). Loops run over lags/taps only; the sample axis is vectorized.
"""

import numpy as np


def autocorr(x, L):
    out = np.empty(L, dtype=np.float64)
    for t in range(L):
        # np.roll(x, t)[k] == x[(k - t) mod N]
        out[t] = np.dot(x, np.roll(x, t))
    return out


def circular_convolve(x, w):
    y = np.zeros(x.shape[0], dtype=np.float64)
    for k in range(w.shape[0]):
        y += w[k] * np.roll(x, k)
    return y


def toeplitz_matvec(r, v):
    T = v.shape[0]
    idx = np.abs(np.subtract.outer(np.arange(T), np.arange(T)))
    return r[idx] @ v
