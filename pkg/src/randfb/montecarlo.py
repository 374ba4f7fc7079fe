"""Monte Carlo experiment runners.

Every realization of the filterbank for grid point ``g`` and trial ``i`` is
drawn from the substream ``(master_seed, g, i)``; chunks of trials are
reduced in trial order, so results are bit-identical for any thread count.
Grid points are numbered J-major over ``product(J_list, T_list)``.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bounds, orderstats
from .errors import DomainError, InvalidParameterError
from .filterbank import batch_frame_extremes, batch_response_energy, default_sigma_sq, substream
from .signals import Signal, autocorrelation, parse_signal_spec
from .spectrum import q_matrix, spectral_stats

log = logging.getLogger(__name__)

# floats per chunk of stacked filter weights (~32 MB)
CHUNK_FLOATS = 1 << 22


@dataclass
class ExperimentConfig:
    signal: str = "synth:impulse"
    n: int = 1024
    J_list: tuple[int, ...] = (10,)
    T_list: tuple[int, ...] = (8,)
    trials: int = 1000
    master_seed: int = 0
    sigma_policy: str | float = "normalized"
    level: float = 0.95
    ambient: str | int = "T"
    extreme_trials: int = orderstats.DEFAULT_TRIALS
    bins: int = 50
    threads: int = 1

    def __post_init__(self):
        self.J_list = tuple(int(j) for j in self.J_list)
        self.T_list = tuple(int(t) for t in self.T_list)
        self.validate()

    def validate(self):
        if self.trials < 1:
            raise InvalidParameterError(f"trials must be >= 1, got {self.trials}")
        if not self.J_list or not self.T_list:
            raise InvalidParameterError("J_list and T_list must be non-empty")
        if min(self.J_list) < 1 or min(self.T_list) < 1:
            raise InvalidParameterError("filter counts and lengths must be positive")
        if not 0.0 < self.level < 1.0:
            raise InvalidParameterError(f"level must lie in (0, 1), got {self.level}")
        if self.sigma_policy != "normalized":
            try:
                ok = float(self.sigma_policy) > 0
            except (TypeError, ValueError):
                ok = False
            if not ok:
                raise InvalidParameterError(f"sigma_policy must be 'normalized' or a positive float, got {self.sigma_policy!r}")
        if not (self.ambient in ("T", "N") or (isinstance(self.ambient, int) and self.ambient >= 1)):
            raise InvalidParameterError(f"ambient must be 'T', 'N' or a positive int, got {self.ambient!r}")
        if self.threads < 1:
            raise InvalidParameterError("threads must be >= 1")

    def sigma_sq(self, J: int, T: int) -> float:
        if self.sigma_policy == "normalized":
            return default_sigma_sq(J, T)
        return float(self.sigma_policy)

    def ambient_dim(self, T: int) -> int:
        if self.ambient == "T":
            return T
        if self.ambient == "N":
            return self.n
        return int(self.ambient)

    def grid(self):
        """``(g, J, T)`` for every grid point."""
        for g, (J, T) in enumerate(itertools.product(self.J_list, self.T_list)):
            yield g, J, T

    def load_signal(self) -> Signal:
        return parse_signal_spec(self.signal, self.n)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["J_list"] = list(self.J_list)
        d["T_list"] = list(self.T_list)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(**d)


# -- simulation kernels -------------------------------------------------------


def _chunks(trials: int, J: int, T: int):
    size = max(1, CHUNK_FLOATS // (J * T))
    return [(s, min(s + size, trials)) for s in range(0, trials, size)]


def _draw_weights(J, T, sigma_sq, seed, g, start, stop):
    W = np.empty((stop - start, J, T))
    for i in range(start, stop):
        W[i - start] = substream(seed, g, i).standard_normal((J, T))
    W *= math.sqrt(sigma_sq)
    return W


def _map_chunks(fn, chunks, threads):
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, chunks))
    return [fn(c) for c in chunks]


def simulate_energies(x: Signal, J: int, T: int, sigma_sq: float, trials: int, seed: int, g: int = 0, threads: int = 1):
    """``trials`` independent realizations of ``||Phi x||^2``."""
    if T > x.N:
        raise InvalidParameterError(f"T={T} exceeds signal length N={x.N}")
    R = autocorrelation(x, T)

    def work(c):
        return batch_response_energy(_draw_weights(J, T, sigma_sq, seed, g, *c), R)

    return np.concatenate(_map_chunks(work, _chunks(trials, J, T), threads))


def simulate_frame_bounds(J: int, T: int, n: int, sigma_sq: float, trials: int, seed: int, g: int = 0, threads: int = 1):
    """Optimal frame bounds ``(A, B)`` for ``trials`` filterbank realizations."""
    if n < T:
        raise InvalidParameterError(f"ambient dimension n={n} is shorter than T={T}")

    def work(c):
        return batch_frame_extremes(_draw_weights(J, T, sigma_sq, seed, g, *c), n)

    parts = _map_chunks(work, _chunks(trials, J, T), threads)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


# -- statistics helpers -------------------------------------------------------


def _var(a) -> float:
    return float(a.var(ddof=1)) if a.size > 1 else 0.0


def _se_mean(a) -> float:
    return float(a.std(ddof=1) / math.sqrt(a.size)) if a.size > 1 else math.nan


def _se_var(a) -> float:
    """Large-sample standard error of the sample variance."""
    if a.size < 4:
        return math.nan
    d = a - a.mean()
    m2 = float(np.mean(d * d))
    m4 = float(np.mean(d**4))
    return math.sqrt(max(m4 - m2 * m2, 0.0) / a.size)


def retained_band(dev, level: float) -> tuple[float, float]:
    """Min/max of the ``ceil(level * n)`` deviations closest to zero."""
    dev = np.asarray(dev)
    k = max(1, math.ceil(level * dev.size - 1e-9))
    kept = dev[np.argsort(np.abs(dev), kind="stable")[:k]]
    return float(kept.min()), float(kept.max())


def _percentiles(a, level):
    q = 50.0 * (1.0 - level)
    lo, hi = np.percentile(a, [q, 100.0 - q])
    return float(lo), float(hi)


# -- energy histogram ---------------------------------------------------------


@dataclass(frozen=True)
class EnergyDistribution:
    J: int
    T: int
    mean: float
    variance: float
    retained_lo: float
    retained_hi: float
    count: int
    seed: int


@dataclass
class EnergyHistogram:
    distribution: EnergyDistribution
    samples: np.ndarray
    counts: np.ndarray
    edges: np.ndarray
    analytic_mean: float
    analytic_variance: float
    signal_energy: float


def run_energy_histogram(cfg: ExperimentConfig) -> EnergyHistogram:
    if len(cfg.J_list) != 1 or len(cfg.T_list) != 1:
        raise InvalidParameterError("energy histogram runs on a single (J, T) grid point")
    x = cfg.load_signal()
    J, T = cfg.J_list[0], cfg.T_list[0]
    s2 = cfg.sigma_sq(J, T)
    e = simulate_energies(x, J, T, s2, cfg.trials, cfg.master_seed, 0, cfg.threads)
    energy = x.energy
    lo, hi = retained_band(e - energy, cfg.level)
    counts, edges = np.histogram(e, bins=cfg.bins)
    R = autocorrelation(x, min(T + 1, x.N))
    dist = EnergyDistribution(J, T, float(e.mean()), _var(e), lo, hi, e.size, cfg.master_seed)
    return EnergyHistogram(
        distribution=dist,
        samples=e,
        counts=counts,
        edges=edges,
        analytic_mean=bounds.expected_energy(J, T, s2, energy),
        analytic_variance=bounds.energy_variance(J, s2, T, R),
        signal_energy=energy,
    )


# -- large deviations ---------------------------------------------------------


@dataclass(frozen=True)
class DeviationRow:
    T: int
    mean_dev: float
    band_lo: float
    band_hi: float
    cantelli_alpha: float
    chernoff_alpha: float
    exceed_cantelli: float
    exceed_chernoff: float
    analytic_variance: float


@dataclass
class DeviationSweep:
    J: int
    signal_energy: float
    rows: list[DeviationRow]
    skipped: list[dict] = field(default_factory=list)


def run_deviation_sweep(cfg: ExperimentConfig) -> DeviationSweep:
    """Per filter length: empirical deviation band and the two analytic alphas at ``p = 1 - level``."""
    x = cfg.load_signal()
    J = cfg.J_list[0]
    energy = x.energy
    p = 1.0 - cfg.level
    rows, skipped = [], []
    for g, T in enumerate(cfg.T_list):
        if T > x.N:
            log.warning("skipping T=%d > N=%d", T, x.N)
            skipped.append({"T": T, "reason": f"T exceeds signal length N={x.N}"})
            continue
        s2 = cfg.sigma_sq(J, T)
        e = simulate_energies(x, J, T, s2, cfg.trials, cfg.master_seed, g, cfg.threads)
        d = e - energy
        lo, hi = retained_band(d, cfg.level)
        V = bounds.energy_variance(J, s2, T, autocorrelation(x, min(T + 1, x.N)))
        a_c = bounds.cantelli_alpha(p, V, energy)
        a_h = bounds.chernoff_alpha(p, J, T, spectral_stats(q_matrix(x, T)), energy)
        rows.append(
            DeviationRow(
                T=T,
                mean_dev=float(d.mean()),
                band_lo=lo,
                band_hi=hi,
                cantelli_alpha=a_c,
                chernoff_alpha=a_h,
                exceed_cantelli=float(np.mean(e >= (1.0 + a_c) * energy)),
                exceed_chernoff=float(np.mean(e >= (1.0 + a_h) * energy)),
                analytic_variance=V,
            )
        )
    return DeviationSweep(J=J, signal_energy=energy, rows=rows, skipped=skipped)


# -- frame bounds -------------------------------------------------------------


@dataclass(frozen=True)
class FrameBoundRow:
    T: int
    n: int
    mean_A: float
    mean_B: float
    se_A: float
    se_B: float
    var_A: float
    var_B: float
    se_var_A: float
    se_var_B: float
    lo_A: float
    hi_A: float
    lo_B: float
    hi_B: float
    thm1_lo: float
    thm1_hi: float
    asym_lo: float
    asym_hi: float
    var_lo: float
    var_hi: float
    singular: int


def run_framebound_sweep(cfg: ExperimentConfig) -> list[FrameBoundRow]:
    if cfg.sigma_policy != "normalized":
        raise InvalidParameterError("frame-bound sweep requires sigma_policy='normalized'")
    J = cfg.J_list[0]
    rows = []
    for g, T in enumerate(cfg.T_list):
        n = cfg.ambient_dim(T)
        A, B = simulate_frame_bounds(J, T, n, cfg.sigma_sq(J, T), cfg.trials, cfg.master_seed, g, cfg.threads)
        lo_A, hi_A = _percentiles(A, cfg.level)
        lo_B, hi_B = _percentiles(B, cfg.level)
        thm_lo, thm_hi = orderstats.theorem1_bounds(J, T, cfg.extreme_trials, cfg.master_seed, threads=cfg.threads)
        asym_lo, asym_hi = bounds.gaussian_extreme_asymptotics(J, T)
        v_lo, v_hi = bounds.variance_bounds_AB(J, T)
        rows.append(
            FrameBoundRow(
                T=T,
                n=n,
                mean_A=float(A.mean()),
                mean_B=float(B.mean()),
                se_A=_se_mean(A),
                se_B=_se_mean(B),
                var_A=_var(A),
                var_B=_var(B),
                se_var_A=_se_var(A),
                se_var_B=_se_var(B),
                lo_A=lo_A,
                hi_A=hi_A,
                lo_B=lo_B,
                hi_B=hi_B,
                thm1_lo=thm_lo,
                thm1_hi=thm_hi,
                asym_lo=asym_lo / J,
                asym_hi=asym_hi / J,
                var_lo=v_lo,
                var_hi=v_hi,
                singular=int(np.sum(A <= 1e-14 * B)),
            )
        )
    return rows


# -- condition numbers --------------------------------------------------------


@dataclass(frozen=True)
class ConditionCell:
    J: int
    T: int
    n: int
    trials: int
    mean_A: float
    mean_B: float
    mean_kappa: float
    se_kappa: float
    ratio_of_means: float
    var_A: float
    var_B: float
    lo_kappa: float
    hi_kappa: float
    cov_kA: float
    se_cov_kA: float
    excluded: int
    exclusion_rate: float
    kappa_tilde: float | None
    kappa_tilde_log2: float | None

    @property
    def on_log2_diagonal(self) -> bool:
        return 2**self.J == self.T


@dataclass
class ConditionGrid:
    cells: list[ConditionCell]

    def cell(self, J: int, T: int) -> ConditionCell:
        for c in self.cells:
            if c.J == J and c.T == T:
                return c
        raise KeyError((J, T))

    @property
    def diagonal(self) -> list[ConditionCell]:
        """Cells with ``J = log2(T)``, ordered by T."""
        return sorted((c for c in self.cells if c.on_log2_diagonal), key=lambda c: c.T)


def _kappa_tilde_or_none(J, T, base=None):
    try:
        return bounds.kappa_tilde(J, T, base=base)
    except DomainError:
        return None


def run_condition_sweep(cfg: ExperimentConfig) -> ConditionGrid:
    cells = []
    for g, J, T in cfg.grid():
        n = cfg.ambient_dim(T)
        A, B = simulate_frame_bounds(J, T, n, cfg.sigma_sq(J, T), cfg.trials, cfg.master_seed, g, cfg.threads)
        ok = A > 1e-14 * B
        excluded = int(A.size - ok.sum())
        if excluded:
            log.info("J=%d T=%d: %d singular realizations excluded from kappa", J, T, excluded)
        Ak, Bk = A[ok], B[ok]
        kappa = Bk / Ak
        if kappa.size > 1:
            dk, dA = kappa - kappa.mean(), Ak - Ak.mean()
            prod = dk * dA
            cov = float(prod.sum() / (kappa.size - 1))
            se_cov = float(prod.std(ddof=1) / math.sqrt(kappa.size))
        else:
            cov, se_cov = 0.0, math.nan
        lo_k, hi_k = _percentiles(kappa, cfg.level) if kappa.size else (math.nan, math.nan)
        mean_A, mean_B = float(A.mean()), float(B.mean())
        cells.append(
            ConditionCell(
                J=J,
                T=T,
                n=n,
                trials=int(A.size),
                mean_A=mean_A,
                mean_B=mean_B,
                mean_kappa=float(kappa.mean()) if kappa.size else math.inf,
                se_kappa=_se_mean(kappa),
                ratio_of_means=mean_B / mean_A,
                var_A=_var(A),
                var_B=_var(B),
                lo_kappa=lo_k,
                hi_kappa=hi_k,
                cov_kA=cov,
                se_cov_kA=se_cov,
                excluded=excluded,
                exclusion_rate=excluded / A.size,
                kappa_tilde=_kappa_tilde_or_none(J, T),
                kappa_tilde_log2=_kappa_tilde_or_none(J, T, base=2),
            )
        )
    return ConditionGrid(cells)
