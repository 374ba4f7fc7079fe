"""Backend selection for the hot direct-sum kernels.

The compiled Cython module is used when importable. Setting the environment
variable ``RANDFB_PURE_PYTHON=1`` before import forces the numpy fallback.
``BACKEND`` names the implementation in use.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

if os.environ.get("RANDFB_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def _as_f64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def autocorr(x, L: int) -> np.ndarray:
    """Circular autocorrelation ``r[t] = sum_k x[k] x[(k - t) mod N]`` for ``0 <= t < L``."""
    return _impl.autocorr(_as_f64(x), int(L))


def circular_convolve(x, w) -> np.ndarray:
    """``y[n] = sum_k w[k] x[(n - k) mod N]``; requires ``len(w) <= len(x)``."""
    return _impl.circular_convolve(_as_f64(x), _as_f64(w))


def toeplitz_matvec(r, v) -> np.ndarray:
    return _impl.toeplitz_matvec(_as_f64(r), _as_f64(v))
