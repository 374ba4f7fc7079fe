"""Monte Carlo order statistics of i.i.d. chi-squared variables.

E[min] and E[max] of T draws from chi2(J), divided by J, sandwich the expected
optimal frame bounds of a normalized random filterbank.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSamplingError, InvalidParameterError
from .filterbank import substream

MIN_TRIALS = 100
DEFAULT_TRIALS = 100_000
CHUNK = 4096


@dataclass(frozen=True)
class ExtremeEstimate:
    j_dof: int
    t_count: int
    trials: int
    mean_min: float
    mean_max: float
    se_min: float
    se_max: float


def sample_chi2(J: int, rng: np.random.Generator) -> float:
    """One chi2(J) draw as a sum of J squared standard Gaussians."""
    if J < 1:
        raise InvalidParameterError(f"degrees of freedom must be >= 1, got {J}")
    z = rng.standard_normal(J)
    return float(np.dot(z, z))


def _trial_extremes(J, T, seed, start, stop, method):
    mins = np.empty(stop - start)
    maxs = np.empty(stop - start)
    for i in range(start, stop):
        rng = substream(seed, i)
        if method == "gamma":
            y = rng.chisquare(J, size=T)
        else:
            z = rng.standard_normal((T, J))
            y = np.einsum("tj,tj->t", z, z)
        mins[i - start] = y.min()
        maxs[i - start] = y.max()
    return mins, maxs


def draw_extremes(J: int, T: int, trials: int, seed: int, method: str = "gamma", threads: int = 1):
    """Per-trial ``(min, max)`` arrays of T i.i.d. chi2(J) draws.

    Trial ``i`` uses the substream ``(seed, i)``; results are placed by trial
    index, so ``threads`` never changes the output.
    """
    if method not in ("gamma", "gaussian"):
        raise InvalidParameterError(f"method must be 'gamma' or 'gaussian', got {method!r}")
    if J < 1 or T < 1:
        raise InvalidParameterError(f"need J >= 1 and T >= 1, got J={J}, T={T}")
    bounds = [(s, min(s + CHUNK, trials)) for s in range(0, trials, CHUNK)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda b: _trial_extremes(J, T, seed, b[0], b[1], method), bounds))
    else:
        parts = [_trial_extremes(J, T, seed, a, b, method) for a, b in bounds]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def estimate_extremes(
    J: int, T: int, trials: int = DEFAULT_TRIALS, seed: int = 0, method: str = "gamma", threads: int = 1
) -> ExtremeEstimate:
    """Monte Carlo means and standard errors of the min and max of T chi2(J) draws.

    ``method="gamma"`` draws chi2 variates directly (fast); ``method="gaussian"``
    sums J squared standard normals per variate. Both are exact samplers.
    """
    if trials < MIN_TRIALS:
        raise InsufficientSamplingError(f"need at least {MIN_TRIALS} trials, got {trials}")
    mins, maxs = draw_extremes(J, T, trials, seed, method=method, threads=threads)
    root = math.sqrt(trials)
    return ExtremeEstimate(
        j_dof=J,
        t_count=T,
        trials=trials,
        mean_min=float(mins.mean()),
        mean_max=float(maxs.mean()),
        se_min=float(mins.std(ddof=1) / root),
        se_max=float(maxs.std(ddof=1) / root),
    )


def theorem1_bounds(
    J: int, T: int, trials: int = DEFAULT_TRIALS, seed: int = 0, method: str = "gamma", threads: int = 1
) -> tuple[float, float]:
    """``(E[Y_min]/J, E[Y_max]/J)``: lower bound on E[A] and upper bound on E[B]."""
    est = estimate_extremes(J, T, trials, seed, method=method, threads=threads)
    return est.mean_min / J, est.mean_max / J
