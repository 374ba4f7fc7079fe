"""Stability analysis of randomly initialized 1-D convolutional layers.

Energy moments and large-deviation bounds of ``||Phi x||^2`` for a random
Gaussian FIR filterbank ``Phi``, optimal frame bounds and condition numbers,
and Monte Carlo runners that check them.
"""

from .bounds import (
    cantelli_alpha,
    cantelli_prob,
    chernoff_alpha,
    chernoff_prob,
    dense_layer_moments,
    energy_variance,
    expected_energy,
    gaussian_extreme_asymptotics,
    kappa_tilde,
    variance_bounds_AB,
)
from .filterbank import Filterbank, FrameBounds, circular_convolve, frame_bounds, response_energy, sample_filterbank
from .kernels import BACKEND
from .orderstats import ExtremeEstimate, estimate_extremes, sample_chi2, theorem1_bounds
from .signals import (
    AutocorrProfile,
    Signal,
    autocorrelation,
    gen_brownian,
    gen_constant,
    gen_impulse,
    gen_sine,
    load_wav,
    parse_signal_spec,
)
from .spectrum import QMatrix, SpectralStats, q_matrix, quadratic_energy, spectral_stats

__version__ = "0.1.0"
