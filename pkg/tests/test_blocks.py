"""Tests for block geometry, per-block U-statistics, and block means."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ustatboot.blocks import (
    BlockScheme,
    BlockStats,
    block_count,
    block_means,
    block_u_stats,
)
from ustatboot.kernels import CountingKernel, Sample, additive_kernel, variance_kernel

finite = st.floats(min_value=-1e5, max_value=1e5, allow_nan=False, allow_infinity=False)


@st.composite
def sample_and_block_length(draw, max_n=48):
    n = draw(st.integers(min_value=2, max_value=max_n))
    l = draw(st.integers(min_value=2, max_value=n))
    values = draw(st.lists(finite, min_size=n, max_size=n).map(np.array))
    return Sample(values), l


def test_block_count_examples():
    assert block_count(BlockScheme.CIRCULAR, 10, 3) == 10
    assert block_count(BlockScheme.NONOVERLAPPING, 10, 3) == 3
    assert block_count(BlockScheme.NONOVERLAPPING, 9, 3) == 3


def test_block_count_rejects_bad_lengths():
    for bad in (1, 0, -2, 11):
        with pytest.raises(ValueError):
            block_count(BlockScheme.CIRCULAR, 10, bad)


def test_block_u_stats_wraps_circularly():
    stats = block_u_stats(Sample([1.0, 2.0, 3.0, 4.0]), variance_kernel,
                          BlockScheme.CIRCULAR, 2)
    assert np.array_equal(stats.values, [0.5, 0.5, 0.5, 4.5])
    assert stats.num_blocks == 4 and stats.block_length == 2 and stats.source_n == 4


def test_block_u_stats_nonoverlapping_drops_leftover():
    stats = block_u_stats(Sample([1.0, 2.0, 3.0, 4.0, 9.0]), variance_kernel,
                          BlockScheme.NONOVERLAPPING, 2)
    assert np.array_equal(stats.values, [0.5, 0.5])


def test_block_u_stats_constant_sample_is_zero():
    stats = block_u_stats(Sample(np.full(6, 3.25)), variance_kernel,
                          BlockScheme.CIRCULAR, 3)
    assert np.array_equal(stats.values, np.zeros(6))


def test_block_means_examples():
    circ = block_means(Sample([1.0, 2.0, 3.0, 4.0]), BlockScheme.CIRCULAR, 2)
    assert np.array_equal(circ.values, [1.5, 2.5, 3.5, 2.5])
    non = block_means(Sample([1.0, 2.0, 3.0, 4.0]), BlockScheme.NONOVERLAPPING, 2)
    assert np.array_equal(non.values, [1.5, 3.5])


def test_block_means_allows_unit_blocks():
    one = block_means(Sample([5.0, -1.0, 2.0]), BlockScheme.CIRCULAR, 1)
    assert np.array_equal(one.values, [5.0, -1.0, 2.0])
    const = block_means(Sample(np.full(5, 2.5)), BlockScheme.NONOVERLAPPING, 1)
    assert np.array_equal(const.values, np.full(5, 2.5))


@given(data=sample_and_block_length())
def test_circular_shift_equivariance(data):
    sample, l = data
    rolled = Sample(np.roll(sample.values, -1))
    a = block_u_stats(sample, variance_kernel, BlockScheme.CIRCULAR, l)
    b = block_u_stats(rolled, variance_kernel, BlockScheme.CIRCULAR, l)
    assert np.array_equal(np.roll(a.values, -1), b.values)


@given(data=sample_and_block_length())
def test_nonoverlapping_values_are_subsequence_of_circular(data):
    sample, l = data
    m = sample.n // l
    circ = block_u_stats(sample, variance_kernel, BlockScheme.CIRCULAR, l)
    non = block_u_stats(sample, variance_kernel, BlockScheme.NONOVERLAPPING, l)
    assert np.array_equal(non.values, circ.values[:: l][:m])


@given(data=sample_and_block_length())
def test_additive_kernel_block_u_stats_reduce_to_block_means(data):
    sample, l = data
    # Pair-sum accumulation error grows with the input magnitude even when
    # the block mean cancels toward zero, so scale the tolerance by max |x|.
    atol = 1e-12 * max(1.0, float(np.abs(sample.values).max()))
    for scheme in (BlockScheme.CIRCULAR, BlockScheme.NONOVERLAPPING):
        u = block_u_stats(sample, additive_kernel, scheme, l)
        means = block_means(sample, scheme, l)
        assert np.allclose(u.values, means.values, rtol=1e-12, atol=atol)


def test_additive_reduction_is_bitwise_on_dyadic_values():
    values = np.array([3.0, -1.25, 0.5, 2.375, -0.875, 1.0, 0.0078125, -4.5])
    for scheme in (BlockScheme.CIRCULAR, BlockScheme.NONOVERLAPPING):
        for l in (2, 3, 4):
            u = block_u_stats(Sample(values), additive_kernel, scheme, l)
            means = block_means(Sample(values), scheme, l)
            assert np.array_equal(u.values, means.values)


@given(n=st.integers(min_value=2, max_value=30), l=st.integers(min_value=2, max_value=30))
def test_block_u_stats_evaluation_counts(n, l):
    if l > n:
        n, l = l, n
    sample = Sample(np.arange(n, dtype=float))
    per_block = l * (l - 1) // 2
    for scheme in (BlockScheme.CIRCULAR, BlockScheme.NONOVERLAPPING):
        counter = CountingKernel(variance_kernel)
        stats = block_u_stats(sample, counter, scheme, l)
        assert counter.evals == stats.num_blocks * per_block


def test_block_stats_validation():
    with pytest.raises(ValueError):
        BlockStats(scheme=BlockScheme.CIRCULAR, block_length=2,
                   values=np.zeros(3), source_n=4)  # needs n values
    with pytest.raises(ValueError):
        BlockStats(scheme=BlockScheme.NONOVERLAPPING, block_length=5,
                   values=np.zeros(2), source_n=4)  # l > n
    with pytest.raises(ValueError):
        BlockStats(scheme=BlockScheme.CIRCULAR, block_length=2,
                   values=np.zeros((2, 2)), source_n=2)


def test_block_stats_values_are_immutable():
    stats = block_u_stats(Sample([1.0, 2.0, 3.0, 4.0]), variance_kernel,
                          BlockScheme.CIRCULAR, 2)
    with pytest.raises(ValueError):
        stats.values[0] = 9.0
