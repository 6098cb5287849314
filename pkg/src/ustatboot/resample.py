"""Resampling methods for U-statistics on blocks, and interval construction.

Three methods produce replicates of the scaled, centered statistic:

* ``new_bootstrap`` draws m = n // l block indices with replacement from the
  precomputed per-block U-statistics and averages them.  Replicate b is
  sqrt(m*l) * (mean of the m drawn block values - mean of all block values).
  After the one-off precompute this touches no kernel at all.
* ``plug_in_bootstrap`` draws the same m block indices per replicate, but
  concatenates the underlying observations into a pseudo-series of length
  m*l and recomputes the full U-statistic on it: m*l*(m*l - 1)/2 kernel
  evaluations per replicate.  Replicates are centered at the mean of the raw
  bootstrap statistics.
* ``subsampling_distribution`` is deterministic: one replicate per block,
  sqrt(l) * (block U-statistic - full-sample U-statistic).

Replicate b of a seeded resampler is a pure function of (inputs, seed, b):
index draws come from the substream with seed ``derive_seed(seed, b)``, so
results are bit-identical regardless of batching or replicate order.

Intervals are percentile intervals taken about the replicate mean: with q_p
the p-quantile of the replicates and rbar their mean, the level-gamma
interval for the parameter is

    [point + (q_{(1-gamma)/2} - rbar) / sqrt(n),
     point + (q_{(1+gamma)/2} - rbar) / sqrt(n)].

Bootstrap replicates are centered at their own resampling-world mean, so for
them rbar is zero up to Monte Carlo noise and the interval reads the
replicate quantiles directly; for subsampling the subtraction re-centers the
block statistics at their mean.  For symmetric replicate distributions this
coincides with the reflected (root) interval; for skewed ones it keeps the
long replicate tail on the matching side of the interval, which measurably
improves finite-sample coverage for right-skewed kernels at short block
lengths.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ustatboot.blocks import BlockScheme, BlockStats, block_count, block_means, block_u_stats
from ustatboot.kernels import Sample, u_statistic
from ustatboot.rng import GOLDEN, bounded_from_u64, derive_seed_array, mix64_array


class Method(enum.Enum):
    NEW_BOOTSTRAP = "new"
    PLUG_IN = "plugin"
    SUBSAMPLING = "subsample"
    BLOCK_MEAN = "blockmean"


class EnumerationGuardError(RuntimeError):
    """Raised when an exact enumeration would exceed its size guard."""


@dataclass(frozen=True)
class ReplicateSet:
    """Replicates of a scaled, centered statistic plus their provenance.

    ``replicates[b] == scale * (raw statistic of draw b - center)``.  For
    deterministic methods (subsampling) ``seed`` is None.
    """

    method: Method
    scheme: BlockScheme
    n: int
    l: int
    m: int
    num_replicates: int
    seed: int | None
    center: float
    scale: float
    replicates: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.replicates, dtype=np.float64)
        if v.ndim != 1 or v.size != self.num_replicates:
            raise ValueError(
                f"expected {self.num_replicates} replicates, got array of shape {v.shape}"
            )
        if self.num_replicates < 1:
            raise ValueError("replicate set must be non-empty")
        if not np.all(np.isfinite(v)):
            raise ValueError("replicates contain non-finite values")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "replicates", v)


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    method: Method

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must be in (0, 1), got {self.level}")
        if not self.lower <= self.upper:
            raise ValueError(f"interval bounds out of order: [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def covers(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def bootstrap_expectation(stats: BlockStats) -> float:
    """Exact resampling-world mean of one drawn block value: mean of all values."""
    return float(np.mean(stats.values))


def bootstrap_variance_closed_form(stats: BlockStats) -> float:
    """Exact resampling-world variance of sqrt(m*l) times the resample mean.

    One draw has variance equal to the population variance of the block
    values; the mean of m independent draws scales it by 1/m, and the
    sqrt(m*l) factor multiplies it back to l * popvar(values).
    """
    l = stats.block_length
    return float(np.var(stats.values)) * l


def _resample_size(stats: BlockStats) -> int:
    m = stats.source_n // stats.block_length
    if m < 1:
        raise ValueError(
            f"no complete block fits: n={stats.source_n}, l={stats.block_length}"
        )
    return m


def _draw_index_matrix(seed: int, num_replicates: int, m: int, num_blocks: int) -> np.ndarray:
    """Block indices for all replicates; row b uses substream derive_seed(seed, b)."""
    seeds = derive_seed_array(seed, np.arange(num_replicates))
    ctr = (np.arange(1, m + 1, dtype=np.uint64)) * np.uint64(GOLDEN)
    u = mix64_array(seeds[:, None] + ctr[None, :])
    return bounded_from_u64(u, num_blocks)


def _mean_resample(
    stats: BlockStats, num_replicates: int, seed: int, method: Method
) -> ReplicateSet:
    """Shared draw-and-average core for statistic-level bootstraps."""
    if num_replicates < 1:
        raise ValueError(f"need at least one replicate, got {num_replicates}")
    m = _resample_size(stats)
    idx = _draw_index_matrix(seed, num_replicates, m, stats.num_blocks)
    raw = stats.values[idx].mean(axis=1)
    center = bootstrap_expectation(stats)
    scale = math.sqrt(m * stats.block_length)
    return ReplicateSet(
        method=method,
        scheme=stats.scheme,
        n=stats.source_n,
        l=stats.block_length,
        m=m,
        num_replicates=num_replicates,
        seed=seed,
        center=center,
        scale=scale,
        replicates=scale * (raw - center),
    )


def new_bootstrap(stats: BlockStats, num_replicates: int, seed: int) -> ReplicateSet:
    """Bootstrap that resamples precomputed per-block U-statistics.

    Draws m = n // l indices uniformly with replacement from the block
    collection and averages the corresponding values; no kernel evaluations
    occur here.
    """
    return _mean_resample(stats, num_replicates, seed, Method.NEW_BOOTSTRAP)


def block_mean_bootstrap(
    sample: Sample, scheme: BlockScheme, l: int, num_replicates: int, seed: int
) -> ReplicateSet:
    """Classical block bootstrap of the sample mean on the same draw stream.

    Runs the identical resampling core as :func:`new_bootstrap` but on block
    means, so with equal seeds the two share their index draws.  With the
    additive kernel a block's U-statistic equals its mean, and the two
    methods then produce bit-identical replicates.
    """
    return _mean_resample(block_means(sample, scheme, l), num_replicates, seed, Method.BLOCK_MEAN)


def plug_in_bootstrap(
    sample: Sample, kernel, scheme: BlockScheme, l: int, num_replicates: int, seed: int
) -> ReplicateSet:
    """Block bootstrap that recomputes the full U-statistic per pseudo-series.

    Replicate b draws the same m block indices as :func:`new_bootstrap` with
    the same seed, concatenates those blocks into a pseudo-series of length
    m*l, and evaluates its U-statistic directly (m*l*(m*l-1)/2 kernel
    evaluations).  Replicates are sqrt(m*l) times the deviation of each raw
    statistic from the mean of all raw statistics.
    """
    if num_replicates < 1:
        raise ValueError(f"need at least one replicate, got {num_replicates}")
    n = sample.n
    nb = block_count(scheme, n, l)
    m = n // l
    if m < 1:
        raise ValueError(f"no complete block fits: n={n}, l={l}")
    ml = m * l
    x = sample.values
    offs = np.arange(l)

    idx = _draw_index_matrix(seed, num_replicates, m, nb)
    starts = idx if scheme is BlockScheme.CIRCULAR else idx * l

    raw = np.empty(num_replicates)
    npairs = ml * (ml - 1) / 2
    batch = max(1, min(num_replicates, 65536 // ml))
    for s0 in range(0, num_replicates, batch):
        sb = starts[s0 : s0 + batch]
        pos = sb[:, :, None] + offs[None, None, :]
        if scheme is BlockScheme.CIRCULAR:
            pos %= n
        series = x[pos.reshape(sb.shape[0], ml)]
        acc = np.zeros(sb.shape[0])
        for d in range(1, ml):
            acc += kernel.eval(series[:, d:], series[:, : ml - d]).sum(axis=1)
        raw[s0 : s0 + sb.shape[0]] = acc / npairs

    center = float(np.mean(raw))
    scale = math.sqrt(ml)
    return ReplicateSet(
        method=Method.PLUG_IN,
        scheme=scheme,
        n=n,
        l=l,
        m=m,
        num_replicates=num_replicates,
        seed=seed,
        center=center,
        scale=scale,
        replicates=scale * (raw - center),
    )


def subsampling_distribution(
    sample: Sample,
    kernel,
    scheme: BlockScheme,
    l: int,
    *,
    stats: BlockStats | None = None,
    point: float | None = None,
) -> ReplicateSet:
    """Subsampling replicates: sqrt(l) times each block's deviation from the
    full-sample U-statistic.

    Deterministic given the sample; one replicate per block.  ``stats`` and
    ``point`` may be passed to reuse precomputed block statistics and the
    full-sample statistic in sweeps.
    """
    if stats is None:
        stats = block_u_stats(sample, kernel, scheme, l)
    if point is None:
        point = u_statistic(sample, kernel)
    scale = math.sqrt(stats.block_length)
    return ReplicateSet(
        method=Method.SUBSAMPLING,
        scheme=stats.scheme,
        n=stats.source_n,
        l=stats.block_length,
        m=stats.source_n // stats.block_length,
        num_replicates=stats.num_blocks,
        seed=None,
        center=float(point),
        scale=scale,
        replicates=scale * (stats.values - point),
    )


def _quantile_sorted(sorted_values: np.ndarray, p: float) -> float:
    """Left-continuous empirical quantile: the ceil(p*B)-th order statistic.

    The tiny downward nudge keeps ceil exact when p*B is an integer in real
    arithmetic but lands just above it in floating point (e.g. 0.95 * 100).
    """
    b = sorted_values.size
    k = math.ceil(p * b - 1e-9)
    k = min(max(k, 1), b)
    return float(sorted_values[k - 1])


def quantile(reps: ReplicateSet, p: float) -> float:
    """p-quantile of the replicates, p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must be in (0, 1), got {p}")
    return _quantile_sorted(np.sort(reps.replicates), p)


def confidence_interval(
    point: float, reps: ReplicateSet, n: int, level: float
) -> ConfidenceInterval:
    """Percentile interval about the replicate mean for the parameter
    estimated by ``point``.

    With q_lo = q_{(1-level)/2}, q_hi = q_{(1+level)/2} and rbar the mean of
    the replicates, returns
    [point + (q_lo - rbar) / sqrt(n), point + (q_hi - rbar) / sqrt(n)].
    ``n`` is the length of the observed series the interval is for.
    """
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    if n < 1:
        raise ValueError(f"series length must be >= 1, got {n}")
    srt = np.sort(reps.replicates)
    q_hi = _quantile_sorted(srt, (1.0 + level) / 2.0)
    q_lo = _quantile_sorted(srt, (1.0 - level) / 2.0)
    rbar = float(reps.replicates.mean())
    root_n = math.sqrt(n)
    return ConfidenceInterval(
        lower=float(point + (q_lo - rbar) / root_n),
        upper=float(point + (q_hi - rbar) / root_n),
        level=level,
        method=reps.method,
    )


@dataclass(frozen=True)
class ExactDistribution:
    """A finite distribution: sorted distinct atoms with their probabilities."""

    atoms: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.atoms, dtype=np.float64)
        p = np.asarray(self.probs, dtype=np.float64)
        if a.shape != p.shape or a.ndim != 1:
            raise ValueError("atoms and probs must be 1-d arrays of equal length")
        if not np.all(np.diff(a) > 0):
            raise ValueError("atoms must be strictly increasing")
        if abs(p.sum() - 1.0) > 1e-12 or np.any(p < 0):
            raise ValueError("probabilities must be non-negative and sum to 1")
        for name, v in (("atoms", a), ("probs", p)):
            v = v.copy()
            v.flags.writeable = False
            object.__setattr__(self, name, v)

    def cdf(self, x) -> np.ndarray:
        """P(X <= x), evaluated elementwise."""
        cum = np.cumsum(self.probs)
        idx = np.searchsorted(self.atoms, np.asarray(x, dtype=np.float64), side="right")
        return np.where(idx > 0, cum[np.minimum(idx, cum.size) - 1], 0.0)


def enumerate_new_bootstrap(stats: BlockStats, max_outcomes: int = 1_000_000) -> ExactDistribution:
    """Exact distribution of the statistic-level bootstrap replicate.

    Enumerates all num_blocks**m equally likely ordered index tuples and
    applies the same mean / center / scale arithmetic as
    :func:`new_bootstrap`, so Monte Carlo replicates are drawn exactly from
    the returned atoms.  Raises :class:`EnumerationGuardError` if the tuple
    count exceeds ``max_outcomes``.
    """
    m = _resample_size(stats)
    nb = stats.num_blocks
    total = nb**m
    if total > max_outcomes:
        raise EnumerationGuardError(
            f"enumeration would cover {total} outcomes, above the guard of {max_outcomes}"
        )
    grids = np.meshgrid(*([np.arange(nb)] * m), indexing="ij")
    idx = np.stack(grids, axis=-1).reshape(total, m)
    raw = stats.values[idx].mean(axis=1)
    center = bootstrap_expectation(stats)
    scale = math.sqrt(m * stats.block_length)
    values = scale * (raw - center)
    atoms, counts = np.unique(values, return_counts=True)
    return ExactDistribution(atoms=atoms, probs=counts / total)
