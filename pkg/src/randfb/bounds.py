"""Closed-form moments, deviation bounds and asymptotics for random filterbanks.

Energies are ``||x||^2`` (``R_xx(0)``), probabilities are clamped to [0, 1].
The Chernoff expressions assume the energy-preserving normalization
``sigma^2 = 1/(J T)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSignalError, DomainError, InvalidLengthError, InvalidParameterError
from .signals import AutocorrProfile, Signal
from .spectrum import SpectralStats

ALPHA_TOL = 1e-10


@dataclass(frozen=True)
class DeviationCertificate:
    """Upper bound on ``P[||Phi x||^2 >= (1 + alpha) ||x||^2]``."""

    alpha: float
    prob_bound: float
    kind: str  # "cantelli" | "chernoff"
    J: int
    T: int
    sigma_sq: float
    signal_digest: str


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, p))


def expected_energy(J: int, T: int, sigma_sq: float, energy: float) -> float:
    return J * T * sigma_sq * energy


def energy_variance(J: int, sigma_sq: float, T: int, R: AutocorrProfile) -> float:
    """``2 J sigma^4 sum_{|tau| <= T} (T - |tau|) R_xx(tau)^2``.

    The lag-``T`` term has zero weight, so a profile over lags ``0..T-1`` is
    enough when the signal is exactly ``T`` samples long.
    """
    need = min(T + 1, R.n)
    if len(R) < need:
        raise InvalidLengthError(f"need autocorrelation lags 0..{need - 1}, profile has {len(R)}")
    r = np.asarray(R.values[:T], dtype=np.float64)
    weights = T - np.arange(T, dtype=np.float64)
    weights[1:] *= 2.0
    return 2.0 * J * sigma_sq**2 * float(np.dot(weights, r * r))


def cantelli_prob(alpha: float, variance: float, energy: float) -> float:
    if alpha < 0 or variance < 0:
        raise InvalidParameterError("alpha and variance must be non-negative")
    if not energy > 0:
        raise DegenerateSignalError("Cantelli bound needs ||x||^2 > 0")
    denom = variance + alpha**2 * energy**2
    if denom == 0.0:
        return 1.0
    return _clamp(variance / denom)


def cantelli_alpha(p: float, variance: float, energy: float) -> float:
    """Smallest ``alpha`` at which the Cantelli bound equals ``p``."""
    if not 0 < p <= 1:
        raise InvalidParameterError(f"probability level must lie in (0, 1], got {p}")
    if not energy > 0:
        raise DegenerateSignalError("Cantelli bound needs ||x||^2 > 0")
    return math.sqrt(variance * (1.0 - p) / p) / energy


def _chernoff_exponent(alpha, J, T, stats: SpectralStats, energy):
    num = alpha**2 * J * T**2 * energy**2
    den = 2.0 * alpha * T * stats.lambda_inf * energy + 2.0 * stats.lambda_2_sq
    return num / den


def _check_stats(stats: SpectralStats, energy):
    if not energy > 0:
        raise DegenerateSignalError("Chernoff bound needs ||x||^2 > 0")
    if not (stats.lambda_2_sq > 0 and stats.lambda_inf > 0):
        raise DegenerateSignalError("Chernoff bound needs a nonzero spectrum")


def chernoff_prob(alpha: float, J: int, T: int, stats: SpectralStats, energy: float) -> float:
    if alpha < 0:
        raise InvalidParameterError("alpha must be non-negative")
    _check_stats(stats, energy)
    return _clamp(math.exp(-_chernoff_exponent(alpha, J, T, stats, energy)))


def chernoff_alpha(p: float, J: int, T: int, stats: SpectralStats, energy: float, tol: float = ALPHA_TOL) -> float:
    """Invert the Chernoff bound by bisection; the exponent is increasing in ``alpha``."""
    if not p > 0:
        raise InvalidParameterError(f"probability level must be positive, got {p}")
    _check_stats(stats, energy)
    if p >= 1:
        return 0.0
    lo, hi = 0.0, 1.0
    while chernoff_prob(hi, J, T, stats, energy) >= p:
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if chernoff_prob(mid, J, T, stats, energy) >= p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def deviation_certificate(kind: str, alpha: float, x: Signal, J: int, T: int) -> DeviationCertificate:
    """Evaluate either bound for a concrete signal at ``sigma^2 = 1/(J T)``."""
    from .signals import autocorrelation
    from .spectrum import q_matrix, spectral_stats

    sigma_sq = 1.0 / (J * T)
    energy = x.energy
    if kind == "cantelli":
        R = autocorrelation(x, min(T + 1, x.N))
        p = cantelli_prob(alpha, energy_variance(J, sigma_sq, T, R), energy)
    elif kind == "chernoff":
        p = chernoff_prob(alpha, J, T, spectral_stats(q_matrix(x, T)), energy)
    else:
        raise InvalidParameterError(f"kind must be 'cantelli' or 'chernoff', got {kind!r}")
    return DeviationCertificate(alpha, p, kind, J, T, sigma_sq, x.digest())


def variance_bounds_AB(J: int, T: int) -> tuple[float, float]:
    """``(2/(T J), 2/J)``: range of Var[A] and Var[B] at ``sigma^2 = 1/(J T)``."""
    return 2.0 / (T * J), 2.0 / J


def kappa_tilde(J: float, T: float, base: float | None = None) -> float:
    """Asymptotic estimate of E[kappa]; requires ``J > 4 log T``.

    ``base=None`` uses the natural log; ``base=2`` gives the log2 variant.
    """
    if T < 2:
        raise DomainError(f"kappa_tilde needs T >= 2, got {T}")
    logT = math.log(T) if base is None else math.log(T, base)
    if not J > 4.0 * logT:
        raise DomainError(f"kappa_tilde needs J > 4 log T = {4.0 * logT:.6g}, got J={J}")
    q = 2.0 * math.sqrt(logT / J)
    return (1.0 + q) / (1.0 - q)


def gaussian_extreme_asymptotics(J: float, T: float) -> tuple[float, float]:
    """Large-T approximations ``J -/+ 2 sqrt(J ln T)`` of the expected min/max of T chi2(J) draws."""
    d = 2.0 * math.sqrt(J * math.log(T))
    return J - d, J + d


def dense_layer_moments(M: int, sigma_sq: float, energy: float) -> tuple[float, float]:
    """Mean and variance of ``||W x||^2`` for an M-row i.i.d. N(0, sigma_sq) matrix."""
    if M < 1:
        raise InvalidParameterError(f"M must be >= 1, got {M}")
    return M * sigma_sq * energy, 2.0 * M * sigma_sq**2 * energy**2
