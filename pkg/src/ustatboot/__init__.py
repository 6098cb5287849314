"""Block resampling for U-statistics of dependent time series.

Provides three interval methods for a degree-two U-statistic computed from a
stationary sequence:

* a statistic-level bootstrap that resamples U-statistics precomputed on
  blocks (cheap: no kernel evaluations at resampling time),
* a plug-in block bootstrap that rebuilds a pseudo-series from drawn blocks
  and recomputes the full U-statistic on it,
* subsampling over the same block collection.

Submodules
----------
rng
    Portable counter-based random number generation.
kernels
    Degree-two kernels, full-sample U-statistics, Hoeffding decomposition.
blocks
    Circular and nonoverlapping block geometry and per-block statistics.
resample
    The three resampling methods, quantiles, confidence intervals, and an
    exact enumeration oracle for small cases.
dgp
    AR(1) data generation with known target parameter.
experiments
    Coverage, mean-squared-error, and cost-accounting studies.
cli
    Command-line entry point (``ustatboot``).
"""

from ustatboot.kernels import (
    Kernel,
    CountingKernel,
    Sample,
    KERNELS,
    variance_kernel,
    additive_kernel,
    u_statistic,
    empirical_hoeffding,
)
from ustatboot.blocks import BlockScheme, BlockStats, block_count, block_u_stats, block_means
from ustatboot.resample import (
    Method,
    ReplicateSet,
    ConfidenceInterval,
    new_bootstrap,
    block_mean_bootstrap,
    plug_in_bootstrap,
    subsampling_distribution,
    bootstrap_expectation,
    bootstrap_variance_closed_form,
    quantile,
    confidence_interval,
    enumerate_new_bootstrap,
    EnumerationGuardError,
)
from ustatboot.dgp import Ar1Config, ar1_generate, true_theta_variance_kernel

__version__ = "0.1.0"

__all__ = [
    "Kernel",
    "CountingKernel",
    "Sample",
    "KERNELS",
    "variance_kernel",
    "additive_kernel",
    "u_statistic",
    "empirical_hoeffding",
    "BlockScheme",
    "BlockStats",
    "block_count",
    "block_u_stats",
    "block_means",
    "Method",
    "ReplicateSet",
    "ConfidenceInterval",
    "new_bootstrap",
    "block_mean_bootstrap",
    "plug_in_bootstrap",
    "subsampling_distribution",
    "bootstrap_expectation",
    "bootstrap_variance_closed_form",
    "quantile",
    "confidence_interval",
    "enumerate_new_bootstrap",
    "EnumerationGuardError",
    "Ar1Config",
    "ar1_generate",
    "true_theta_variance_kernel",
]
