"""Block geometry and per-block statistics.

Two block collections over a series of length n with block length l:

* ``circular``: n blocks, block i covering indices i, i+1, ..., i+l-1
  taken modulo n (every observation appears in exactly l blocks);
* ``nonoverlap``: m = n // l blocks, block k covering indices
  k*l, ..., k*l + l - 1 (trailing remainder observations unused).

Because the nonoverlapping starts {0, l, 2l, ...} are a subset of the
circular starts {0, 1, ..., n-1} and per-block reductions do not mix rows,
nonoverlapping block statistics are bitwise a subsequence of the circular
ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ustatboot.kernels import Sample


class BlockScheme(enum.Enum):
    CIRCULAR = "circular"
    NONOVERLAPPING = "nonoverlap"


def _num_blocks(scheme: BlockScheme, n: int, l: int) -> int:
    return n if scheme is BlockScheme.CIRCULAR else n // l


def block_count(scheme: BlockScheme, n: int, l: int) -> int:
    """Number of blocks of length l in a series of length n.

    Requires 2 <= l <= n (blocks must hold at least one index pair).
    """
    if not 2 <= l <= n:
        raise ValueError(f"block length must satisfy 2 <= l <= n, got l={l}, n={n}")
    return _num_blocks(scheme, n, l)


@dataclass(frozen=True)
class BlockStats:
    """One statistic per block, with the geometry that produced it.

    ``values[k]`` is the statistic of block k; ``source_n`` is the length of
    the underlying series (needed to recover the resample size m = n // l).
    """

    scheme: BlockScheme
    block_length: int
    values: np.ndarray
    source_n: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError(f"block values must be one-dimensional, got shape {v.shape}")
        if not 1 <= self.block_length <= self.source_n:
            raise ValueError(
                f"block length must satisfy 1 <= l <= n, got l={self.block_length}, n={self.source_n}"
            )
        expected = _num_blocks(self.scheme, self.source_n, self.block_length)
        if v.size != expected:
            raise ValueError(
                f"{self.scheme.value} scheme with n={self.source_n}, l={self.block_length} "
                f"has {expected} blocks, got {v.size} values"
            )
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def num_blocks(self) -> int:
        return self.values.size


def _block_matrix(sample: Sample, scheme: BlockScheme, l: int) -> np.ndarray:
    """Rows are the blocks of the sample (a view for the nonoverlapping case)."""
    x = sample.values
    n = x.size
    if scheme is BlockScheme.CIRCULAR:
        idx = (np.arange(n)[:, None] + np.arange(l)[None, :]) % n
        return x[idx]
    m = n // l
    return x[: m * l].reshape(m, l)


def block_u_stats(sample: Sample, kernel, scheme: BlockScheme, l: int) -> BlockStats:
    """U-statistic of each block: mean of h over the l(l-1)/2 pairs within it.

    Every block is computed directly from its own l observations, with
    exactly l(l-1)/2 kernel evaluations per block and no sharing of work
    between overlapping blocks.  Pairs are enumerated by offset, as in
    :func:`ustatboot.kernels.u_statistic`.
    """
    n = sample.n
    nb = block_count(scheme, n, l)
    blk = _block_matrix(sample, scheme, l)
    acc = np.zeros(nb)
    for d in range(1, l):
        acc += kernel.eval(blk[:, d:], blk[:, : l - d]).sum(axis=1)
    values = acc / (l * (l - 1) / 2)
    return BlockStats(scheme=scheme, block_length=l, values=values, source_n=n)


def block_means(sample: Sample, scheme: BlockScheme, l: int) -> BlockStats:
    """Mean of each block (block length l >= 1)."""
    n = sample.n
    if not 1 <= l <= n:
        raise ValueError(f"block length must satisfy 1 <= l <= n, got l={l}, n={n}")
    blk = _block_matrix(sample, scheme, l)
    return BlockStats(scheme=scheme, block_length=l, values=blk.mean(axis=1), source_n=n)
