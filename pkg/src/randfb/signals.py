"""Test signals, WAV ingestion and circular autocorrelation.

All generators return unit-energy signals. Indexing is circular throughout:
sample ``n`` of a length-``N`` signal means ``samples[n % N]``.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import parse_qsl

import numpy as np

from . import kernels
from .errors import (
    DegenerateSignalError,
    InsufficientSamplesError,
    InvalidFrequencyError,
    InvalidLengthError,
    InvalidParameterError,
    RandFBError,
    SilentExcerptError,
    UnsupportedEncodingError,
    WavReadError,
)


@dataclass(frozen=True, eq=False)
class Signal:
    """A finite real waveform with circular indexing."""

    samples: np.ndarray
    name: str = ""

    def __post_init__(self):
        s = np.array(self.samples, dtype=np.float64, copy=True)
        if s.ndim != 1 or s.size < 1:
            raise InvalidLengthError(f"signal must be a non-empty 1-D array, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise InvalidParameterError("signal contains NaN or Inf")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def N(self) -> int:
        return self.samples.shape[0]

    def __len__(self):
        return self.N

    def __getitem__(self, n: int) -> float:
        return float(self.samples[n % self.N])

    @property
    def energy(self) -> float:
        return float(np.dot(self.samples, self.samples))

    def digest(self) -> str:
        return hashlib.sha256(self.samples.tobytes()).hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class AutocorrProfile:
    """Circular autocorrelation values ``R_xx(t)`` for ``0 <= t < L``.

    ``n`` is the length of the source signal, needed to tell a short profile
    from one that already covers every distinct lag.
    """

    values: np.ndarray
    n: int
    source_energy: float = field(init=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "source_energy", float(v[0]))

    def __len__(self):
        return self.values.shape[0]

    def lag(self, t: int) -> float:
        """``R_xx(t)`` for any integer ``t``, using ``R(-t) = R(t)`` and periodicity."""
        t = abs(t) % self.n
        t = min(t, self.n - t)
        if t >= len(self):
            raise InvalidLengthError(f"lag {t} not covered by profile of length {len(self)}")
        return float(self.values[t])


def _unit(samples, name) -> Signal:
    e = float(np.dot(samples, samples))
    if not e > 0.0:
        raise DegenerateSignalError(f"{name}: zero-energy signal cannot be normalized")
    return Signal(samples / math.sqrt(e), name=name)


def _check_length(N) -> int:
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool) or N < 1:
        raise InvalidLengthError(f"signal length must be a positive integer, got {N!r}")
    return int(N)


def gen_impulse(N: int) -> Signal:
    N = _check_length(N)
    x = np.zeros(N)
    x[0] = 1.0
    return Signal(x, name="impulse")


def gen_sine(N: int, cycles: int | None = None) -> Signal:
    """``sin(2*pi*cycles*n/N)`` at unit energy. ``cycles`` defaults to ``N // 4``."""
    N = _check_length(N)
    if cycles is None:
        cycles = max(N // 4, 1)
    if not isinstance(cycles, (int, np.integer)) or not 1 <= cycles <= N / 2:
        raise InvalidFrequencyError(f"cycles must be an integer in [1, N/2], got {cycles!r} for N={N}")
    n = np.arange(N)
    s = np.sin(2.0 * np.pi * int(cycles) * n / N)
    if np.max(np.abs(s)) < 1e-9:
        # cycles = N/2 samples every zero crossing; only rounding noise is left
        raise DegenerateSignalError(f"sine with {cycles} cycles over N={N} samples vanishes at every sample")
    return _unit(s, name=f"sine{cycles}")


def gen_brownian(N: int, seed: int) -> Signal:
    """Mean-removed cumulative sum of i.i.d. standard Gaussians."""
    N = _check_length(N)
    rng = np.random.default_rng(seed)
    s = np.cumsum(rng.standard_normal(N))
    s = s - s.mean()
    if N == 1:
        raise DegenerateSignalError("brownian: a single sample is zero after mean removal")
    return _unit(s, name=f"brownian{seed}")


def gen_constant(N: int) -> Signal:
    N = _check_length(N)
    return Signal(np.full(N, 1.0 / math.sqrt(N)), name="constant")


def _read_wav(path):
    from scipy.io import wavfile

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", wavfile.WavFileWarning)
            _, data = wavfile.read(path)
    except FileNotFoundError as exc:
        raise WavReadError(f"{path}: no such file") from exc
    except (OSError, EOFError) as exc:
        raise WavReadError(f"{path}: {exc}") from exc
    except ValueError as exc:
        msg = str(exc)
        if "format" in msg.lower() and "RIFF" not in msg:
            raise UnsupportedEncodingError(f"{path}: {msg}") from exc
        raise WavReadError(f"{path}: {msg}") from exc
    return data


def load_wav(path, N: int, channel_policy: str = "first") -> Signal:
    """Read the first ``N`` samples of a 16-bit PCM or 32-bit float WAV file.

    ``channel_policy`` is ``"first"`` (left channel) or ``"mean"`` (average of all
    channels). The excerpt is truncated, never resampled, then normalized to unit
    energy.
    """
    N = _check_length(N)
    if channel_policy not in ("first", "mean"):
        raise InvalidParameterError(f"channel_policy must be 'first' or 'mean', got {channel_policy!r}")
    data = _read_wav(str(path))
    if data.dtype == np.int16:
        data = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32:
        data = data.astype(np.float64)
    else:
        raise UnsupportedEncodingError(f"{path}: unsupported sample type {data.dtype}; need int16 or float32")
    if data.ndim == 2:
        data = data[:, 0] if channel_policy == "first" else data.mean(axis=1)
    if data.shape[0] < N:
        raise InsufficientSamplesError(f"{path}: file holds {data.shape[0]} samples, {N} requested")
    excerpt = data[:N]
    if not np.any(excerpt):
        raise SilentExcerptError(f"{path}: the first {N} samples are all zero")
    return _unit(excerpt, name=Path(path).stem)


def autocorrelation(x: Signal, L: int | None = None, method: str = "direct") -> AutocorrProfile:
    """Circular autocorrelation ``R_xx(t) = sum_k x[k] x[(k-t) mod N]`` for ``0 <= t < L``.

    ``method="direct"`` evaluates the O(N*L) sum; ``method="fft"`` goes through
    the power spectrum and agrees with it to rounding error.
    """
    N = x.N
    if L is None:
        L = N
    if not 1 <= L <= N:
        raise InvalidLengthError(f"max lag L must lie in [1, {N}], got {L}")
    if method == "direct":
        r = kernels.autocorr(x.samples, L)
    elif method == "fft":
        X = np.fft.rfft(x.samples)
        r = np.fft.irfft(X.real**2 + X.imag**2, n=N)[:L]
    else:
        raise InvalidParameterError(f"unknown autocorrelation method {method!r}")
    return AutocorrProfile(r, n=N)


SYNTH_NAMES = ("impulse", "sine", "brownian", "constant")


def parse_signal_spec(spec: str, N: int | None = None) -> Signal:
    """Build a signal from ``synth:<name>?param=value`` or ``wav:<path>?channel=mean``.

    Recognised parameters: ``n`` (length, overrides ``N``), ``cycles`` (sine),
    ``seed`` (brownian, default 0), ``channel`` (wav: first|mean).

    >>> parse_signal_spec("synth:sine?cycles=2", N=8).N
    8
    """
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise InvalidParameterError(f"signal spec must start with 'synth:' or 'wav:', got {spec!r}")
    target, _, query = rest.partition("?")
    params = dict(parse_qsl(query, keep_blank_values=True))
    try:
        if "n" in params:
            N = int(params.pop("n"))
        if kind == "synth":
            if N is None:
                raise InvalidParameterError("synthetic signals need a length (--n or ?n=)")
            if target == "impulse":
                return gen_impulse(N)
            if target == "constant":
                return gen_constant(N)
            if target == "sine":
                cycles = params.pop("cycles", None)
                return gen_sine(N, None if cycles is None else int(cycles))
            if target == "brownian":
                return gen_brownian(N, int(params.pop("seed", 0)))
            raise InvalidParameterError(f"unknown synthetic signal {target!r}; choose from {SYNTH_NAMES}")
        if kind == "wav":
            if N is None:
                raise InvalidParameterError("WAV signals need an excerpt length (--n or ?n=)")
            return load_wav(target, N, channel_policy=params.pop("channel", "first"))
    except ValueError as exc:
        if isinstance(exc, RandFBError):
            raise
        raise InvalidParameterError(f"bad parameter in signal spec {spec!r}: {exc}") from exc
    raise InvalidParameterError(f"unknown signal kind {kind!r}")
