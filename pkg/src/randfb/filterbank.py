"""Random Gaussian FIR filterbanks, circular convolution and optimal frame bounds.

DFT convention: unnormalized forward transform, so Parseval reads
``||y||^2 = ||y_hat||^2 / n`` and the Gram symbol ``s[k] = sum_j |w_hat_j[k]|^2``
needs no extra factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidLengthError, InvalidParameterError
from .signals import AutocorrProfile, Signal

SINGULAR_RTOL = 1e-14


def substream(*key: int) -> np.random.Generator:
    """Independent generator for ``key = (seed, i, j, ...)``.

    The first element is the entropy, the rest the spawn key, so streams for
    different indices never overlap and do not depend on how many were drawn.
    """
    seed, *rest = (int(k) for k in key)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=tuple(rest))))


@dataclass(frozen=True, eq=False)
class Filterbank:
    filters: np.ndarray  # (J, T)
    sigma_sq: float
    seed: int | None = None

    def __post_init__(self):
        f = np.array(self.filters, dtype=np.float64, copy=True)
        if f.ndim == 1:
            f = f[None, :]
        if f.ndim != 2 or f.shape[0] < 1 or f.shape[1] < 1:
            raise InvalidLengthError(f"filters must have shape (J, T) with J, T >= 1, got {f.shape}")
        if not np.all(np.isfinite(f)):
            raise InvalidParameterError("filter weights must be finite")
        f.setflags(write=False)
        object.__setattr__(self, "filters", f)

    @property
    def J(self) -> int:
        return self.filters.shape[0]

    @property
    def T(self) -> int:
        return self.filters.shape[1]

    @classmethod
    def from_filters(cls, filters, sigma_sq: float = 1.0) -> "Filterbank":
        """Deterministic filterbank, e.g. for tests; ``sigma_sq`` is informational."""
        return cls(filters, sigma_sq=sigma_sq, seed=None)


@dataclass(frozen=True)
class FrameBounds:
    a: float
    b: float
    kappa: float
    n: int
    singular: bool = False


def default_sigma_sq(J: int, T: int) -> float:
    return 1.0 / (J * T)


def sample_filterbank(J: int, T: int, sigma_sq: float | None = None, seed: int = 0) -> Filterbank:
    """J i.i.d. filters with N(0, sigma_sq) weights; ``sigma_sq`` defaults to ``1/(J*T)``.

    Filter ``j`` is drawn from its own substream of ``(seed, j)``, so it does not
    change when J changes.
    """
    if J < 1 or T < 1:
        raise InvalidParameterError(f"need J >= 1 and T >= 1, got J={J}, T={T}")
    if sigma_sq is None:
        sigma_sq = default_sigma_sq(J, T)
    if not sigma_sq > 0:
        raise InvalidParameterError(f"sigma_sq must be positive, got {sigma_sq}")
    scale = math.sqrt(sigma_sq)
    W = np.stack([substream(seed, j).standard_normal(T) for j in range(J)]) * scale
    return Filterbank(W, sigma_sq=float(sigma_sq), seed=seed)


def circular_convolve(x: Signal, w) -> Signal:
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or not 1 <= w.shape[0] <= x.N:
        raise InvalidLengthError(f"filter length must lie in [1, N={x.N}], got shape {w.shape}")
    return Signal(kernels.circular_convolve(x.samples, w))


def response_energy(fb: Filterbank, x: Signal) -> float:
    """``||Phi x||^2 = sum_j ||x * w_j||^2``."""
    if fb.T > x.N:
        raise InvalidLengthError(f"filter length T={fb.T} exceeds signal length N={x.N}")
    total = 0.0
    for w in fb.filters:
        y = kernels.circular_convolve(x.samples, w)
        total += float(np.dot(y, y))
    return total


def frame_symbol(filters, n: int) -> np.ndarray:
    """``s[k] = sum_j |w_hat_j[k]|^2`` for ``0 <= k <= n//2`` (the rest mirror it).

    ``filters`` may carry leading batch axes: shape ``(..., J, T)``.
    """
    F = np.fft.rfft(filters, n=n, axis=-1)
    return np.sum(F.real**2 + F.imag**2, axis=-2)


def frame_bounds(fb: Filterbank, n: int | None = None) -> FrameBounds:
    """Optimal frame bounds from the eigenvalues of the circulant Gram ``Phi^T Phi``."""
    if n is None:
        n = fb.T
    if n < fb.T:
        raise InvalidLengthError(f"ambient dimension n={n} is shorter than the filters (T={fb.T})")
    s = frame_symbol(fb.filters, n)
    a, b = float(s.min()), float(s.max())
    singular = a <= SINGULAR_RTOL * b
    kappa = math.inf if singular else b / a
    return FrameBounds(a=a, b=b, kappa=kappa, n=n, singular=singular)


def batch_frame_extremes(filters, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``(a, b)`` for a stack of filterbanks of shape ``(trials, J, T)``."""
    s = frame_symbol(filters, n)
    return s.min(axis=-1), s.max(axis=-1)


def lag_weights(R: AutocorrProfile, T: int) -> np.ndarray:
    """``c`` with ``||x * w||^2 = sum_t c[t] r_w[t]``, ``r_w`` the aperiodic autocorrelation of ``w``."""
    if len(R) < T:
        raise InvalidLengthError(f"autocorrelation profile has {len(R)} lags, need {T}")
    c = 2.0 * np.asarray(R.values[:T], dtype=np.float64)
    c[0] *= 0.5
    return c


def batch_response_energy(filters, R: AutocorrProfile) -> np.ndarray:
    """``||Phi x||^2`` for a stack of filterbanks ``(trials, J, T)`` given ``R_xx`` lags ``0..T-1``.

    Uses ``||x * w||^2 = sum_{|t|<T} R_xx(|t|) r_w(t)``, which holds for every
    ``T <= N`` and costs O(T log T) per filter independently of ``N``.
    """
    T = filters.shape[-1]
    c = lag_weights(R, T)
    F = np.fft.rfft(filters, n=2 * T, axis=-1)
    p = np.sum(F.real**2 + F.imag**2, axis=-2)
    rw = np.fft.irfft(p, n=2 * T, axis=-1)[..., :T]
    return rw @ c
