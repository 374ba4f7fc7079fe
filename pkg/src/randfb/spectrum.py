"""The Toeplitz matrix Q_T(x) with ``||x * w||^2 = w^T Q_T(x) w`` and its spectral norms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, DegenerateSignalError, InvalidLengthError, InvalidParameterError
from .signals import Signal, autocorrelation


@dataclass(frozen=True, eq=False)
class QMatrix:
    """``entries[n, t] = R_xx((t - n) mod N)`` for ``0 <= n, t < T``."""

    entries: np.ndarray
    source_energy: float

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def first_row(self) -> np.ndarray:
        return self.entries[0]


@dataclass(frozen=True)
class SpectralStats:
    lambda_inf: float
    lambda_2_sq: float
    trace: float


def q_matrix(x: Signal, T: int) -> QMatrix:
    if not 1 <= T <= x.N:
        raise InvalidLengthError(f"filter length T must lie in [1, N={x.N}], got {T}")
    r = autocorrelation(x, T).values
    # |t - n| < T <= N, and R((t-n) mod N) == R(|t-n|) for real x
    idx = np.abs(np.subtract.outer(np.arange(T), np.arange(T)))
    Q = r[idx]
    Q.setflags(write=False)
    return QMatrix(Q, source_energy=float(r[0]))


def quadratic_energy(x: Signal, w) -> float:
    """``w^T Q_T(x) w``, which equals ``||x * w||^2``."""
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or not 1 <= w.shape[0] <= x.N:
        raise InvalidLengthError(f"filter length must lie in [1, N={x.N}], got shape {w.shape}")
    Q = q_matrix(x, w.shape[0]).entries
    return float(w @ Q @ w)


def _power_iteration(Q, v, tol, max_iter):
    lam = 0.0
    for it in range(1, max_iter + 1):
        y = Q @ v
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0, v, it, True
        lam_new = float(v @ y)
        v = y / ny
        if abs(lam_new - lam) <= tol * abs(lam_new):
            return lam_new, v, it, True
        lam = lam_new
    return lam, v, max_iter, False


def spectral_stats(Q: QMatrix, tol: float = 1e-10, max_iter: int | None = None) -> SpectralStats:
    """Largest eigenvalue, sum of squared eigenvalues and trace of a PSD ``QMatrix``.

    The squared 2-norm of the spectrum is the squared Frobenius norm (Q is
    symmetric); the top eigenvalue comes from power iteration started at the
    normalized all-ones vector. Raises :class:`ConvergenceError` carrying the
    last Rayleigh quotient if ``max_iter`` is exhausted.
    """
    A = Q.entries
    T = A.shape[0]
    trace = float(np.trace(A))
    if not trace > 0.0:
        raise DegenerateSignalError("spectral_stats needs a nonzero signal (trace > 0)")
    if tol <= 0:
        raise InvalidParameterError(f"tol must be positive, got {tol}")
    if max_iter is None:
        max_iter = 10 * T + 1000
    lambda_2_sq = float(np.sum(A * A))

    v = np.ones(T) / math.sqrt(T)
    lam, v, it, ok = _power_iteration(A, v, tol, max_iter)
    if ok:
        # Symmetric Toeplitz eigenvectors are symmetric or skew-symmetric, and the
        # all-ones start never sees the skew ones: restart once with e0 added.
        e0 = np.zeros(T)
        e0[0] = 1.0
        u = v + e0
        lam2, _, it2, ok = _power_iteration(A, u / np.linalg.norm(u), tol, max_iter)
        lam, it = max(lam, lam2), it + it2
    if not ok:
        raise ConvergenceError(
            f"power iteration did not reach relative tolerance {tol} in {max_iter} iterations",
            estimate=lam,
            iterations=it,
        )
    return SpectralStats(lambda_inf=lam, lambda_2_sq=lambda_2_sq, trace=trace)


def dft_spectral_stats(x: Signal) -> SpectralStats:
    """Spectral stats of ``Q_N(x)``, which is circulant with eigenvalues ``|x_hat|^2``."""
    X = np.fft.fft(x.samples)
    p = X.real**2 + X.imag**2
    return SpectralStats(lambda_inf=float(p.max()), lambda_2_sq=float(np.sum(p * p)), trace=float(p.sum()))


def toeplitz_apply(Q: QMatrix, v) -> np.ndarray:
    """``Q @ v`` from the first row alone (direct-sum kernel)."""
    return kernels.toeplitz_matvec(Q.first_row, v)
