"""Data generation: a stationary Gaussian AR(1) process with known targets.

X_t = alpha * X_{t-1} + eps_t with iid standard normal innovations and
|alpha| < 1.  The recursion starts from an exact draw of the stationary law
N(0, 1/(1 - alpha^2)) and additionally discards ``burn_in`` values, so every
emitted value is exactly stationary and the burn-in is belt and braces.

For this process the variance-kernel U-statistic targets
Var(X_t) = 1 / (1 - alpha^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from ustatboot.kernels import Sample
from ustatboot.rng import std_normals, std_normals_matrix


@dataclass(frozen=True)
class Ar1Config:
    """Parameters of one AR(1) draw."""

    alpha: float
    n: int
    burn_in: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not abs(self.alpha) < 1.0:
            raise ValueError(f"stationarity requires |alpha| < 1, got alpha={self.alpha}")
        if self.n < 2:
            raise ValueError(f"series length must be >= 2, got {self.n}")
        if self.burn_in < 0:
            raise ValueError(f"burn-in must be >= 0, got {self.burn_in}")


def true_theta_variance_kernel(alpha: float) -> float:
    """Stationary variance 1 / (1 - alpha^2) of the AR(1) process."""
    if not abs(alpha) < 1.0:
        raise ValueError(f"stationarity requires |alpha| < 1, got alpha={alpha}")
    return 1.0 / (1.0 - alpha * alpha)


def _ar1_filter(alpha: float, x0: np.ndarray, eps: np.ndarray) -> np.ndarray:
    """Run X_t = alpha X_{t-1} + eps_t along the last axis, starting at x0.

    ``lfilter`` with initial condition zi = alpha * x0 performs exactly the
    scalar recursion x[t] = eps[t] + alpha * x[t-1] in order, so the result
    is bit-identical to the naive loop.
    """
    zi = alpha * x0[..., None]
    out, _ = lfilter([1.0], [1.0, -alpha], eps, axis=-1, zi=zi)
    return out


def ar1_generate(cfg: Ar1Config) -> Sample:
    """One AR(1) series of length cfg.n from the stream with seed cfg.seed.

    The stream supplies 1 + burn_in + n standard normals: the first is scaled
    to the stationary initial state, the rest are the innovations.
    """
    z = std_normals(cfg.seed, 1 + cfg.burn_in + cfg.n)
    x0 = z[:1] * math.sqrt(true_theta_variance_kernel(cfg.alpha))
    path = _ar1_filter(cfg.alpha, x0[0:1].reshape(()), z[1:])
    return Sample(path[cfg.burn_in :])


def ar1_generate_batch(alpha: float, n: int, burn_in: int, seeds: np.ndarray) -> np.ndarray:
    """Row j is the series of Ar1Config(alpha, n, burn_in, seeds[j]).

    Vectorized across rows; each row consumes its own stream, so the output
    is independent of how rows are grouped into batches.
    """
    seeds = np.asarray(seeds)
    z = std_normals_matrix(seeds, 1 + burn_in + n)
    x0 = z[:, 0] * math.sqrt(true_theta_variance_kernel(alpha))
    path = _ar1_filter(alpha, x0, z[:, 1:])
    return path[:, burn_in:]
