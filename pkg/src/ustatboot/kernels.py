"""Degree-two kernels, full-sample U-statistics, and the Hoeffding split.

A kernel here is a symmetric function h(x, y) evaluated elementwise on
arrays.  The two built-ins cover the study designs in this package:

* ``variance``: h(x, y) = (x - y)^2 / 2, whose U-statistic is the unbiased
  sample variance;
* ``additive``: h(x, y) = (x + y) / 2, whose U-statistic collapses to the
  sample mean (used to cross-check block resamplers against the classical
  block bootstrap for the mean).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


def _variance_eval(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    d = x - y
    return 0.5 * d * d


def _additive_eval(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return 0.5 * (x + y)


@dataclass(frozen=True)
class Kernel:
    """A symmetric degree-two kernel with a vectorized evaluator.

    ``func`` must accept two broadcastable float64 arrays and return the
    elementwise kernel values.  Module-level evaluator functions keep kernels
    picklable for worker processes.
    """

    name: str
    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    degree: int = 2

    def __post_init__(self):
        if self.degree != 2:
            raise ValueError(f"only degree-2 kernels are supported, got degree {self.degree}")

    def eval(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.func(x, y)


class CountingKernel:
    """Wrap a kernel and count scalar evaluations.

    A vectorized call counts the number of elements of its result, so the
    tally equals the number of scalar h(x, y) evaluations performed.  Used by
    the cost-accounting study and tests that pin exact evaluation counts.
    """

    def __init__(self, kernel: Kernel):
        self.kernel = kernel
        self.name = kernel.name
        self.degree = kernel.degree
        self.evals = 0

    def eval(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = self.kernel.eval(x, y)
        self.evals += int(np.size(out))
        return out

    def reset(self):
        self.evals = 0


variance_kernel = Kernel("variance", _variance_eval)
additive_kernel = Kernel("additive", _additive_eval)

KERNELS = {k.name: k for k in (variance_kernel, additive_kernel)}


@dataclass(frozen=True)
class Sample:
    """An observed univariate series, stored as an immutable float64 array."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError(f"sample must be one-dimensional, got shape {v.shape}")
        if v.size < 2:
            raise ValueError(f"sample needs at least 2 observations, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise ValueError("sample contains non-finite values")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size


def u_statistic(sample: Sample, kernel) -> float:
    """U-statistic of degree two: mean of h over the n(n-1)/2 unordered pairs.

    Pairs are enumerated by index offset d = j - i; for each offset the
    kernel is applied to the two contiguous slices x[d:], x[:-d].  This
    performs exactly n(n-1)/2 kernel evaluations.
    """
    x = sample.values
    n = x.size
    total = 0.0
    for d in range(1, n):
        total += float(kernel.eval(x[d:], x[: n - d]).sum())
    return total / (n * (n - 1) / 2)


@dataclass(frozen=True)
class HoeffdingParts:
    """Result of the empirical Hoeffding decomposition.

    theta_hat is the V-statistic mean over all n^2 ordered pairs (diagonal
    included); h1_table[i] is the centered row mean; h2 is the residual
    matrix h(x_i, x_j) - h1[i] - h1[j] - theta_hat.
    """

    theta_hat: float
    h1_table: np.ndarray
    h2: np.ndarray


def empirical_hoeffding(sample: Sample, kernel) -> HoeffdingParts:
    """Empirical Hoeffding decomposition of a kernel on a sample.

    Materializes the full n-by-n kernel matrix; intended for diagnostic
    sample sizes (n up to a few thousand).

    By construction the parts satisfy, up to rounding:
    sum(h1_table) == 0, every row mean of h2 == 0, and
    h(x_i, x_j) == theta_hat + h1[i] + h1[j] + h2[i, j].
    """
    x = sample.values
    h = kernel.eval(x[:, None], x[None, :])
    theta_hat = float(h.mean())
    h1 = h.mean(axis=1) - theta_hat
    h2 = h - h1[:, None] - h1[None, :] - theta_hat
    return HoeffdingParts(theta_hat=theta_hat, h1_table=h1, h2=h2)
