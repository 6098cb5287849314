"""Portable, counter-based random number generation.

All randomness in this package flows through the SplitMix64 generator in its
counter form: output ``i`` of the stream with seed ``s`` is

    mix64(s + GOLDEN * (i + 1))  (mod 2**64)

where ``mix64`` is the SplitMix64 avalanche finalizer and ``GOLDEN`` is the
64-bit golden-ratio increment 0x9E3779B97F4A7C15.  Because each output is a
pure function of ``(seed, i)``, any slice of a stream can be produced in
vectorized form, in any order, on any number of workers, with bit-identical
results.

Substreams are derived with :func:`derive_seed`, which chains the avalanche
over a path of integer ids.  Replicate ``b`` of a resampler, simulation ``s``
of a study cell, and so on each get their own derived seed, so results never
depend on scheduling or chunking.

Derived quantities are fixed transforms of the 64-bit outputs:

* uniforms on (0, 1): ``((x >> 11) + 0.5) * 2**-53`` (53-bit mantissa,
  never exactly 0 or 1);
* bounded integers in ``[0, n)`` for ``n < 2**32``: the multiply-shift map
  ``(x * n) >> 64``, evaluated exactly in 32-bit halves (no rejection step,
  bias below 2**-32, identical scalar and vectorized);
* standard normals: inverse CDF applied to the uniforms, using the
  rational-minimax approximation of Wichura's algorithm PPND16 (absolute
  error below 1e-15), so streams are reproducible independently of any
  library's internal normal sampler.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 avalanche finalizer on a 64-bit integer (scalar form)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    """Vectorized :func:`mix64` on a uint64 array."""
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def derive_seed(master: int, *path: int) -> int:
    """Derive a substream seed from a master seed and a path of integer ids.

    The derivation is ``s = mix64(master)`` followed, for each id ``k`` on the
    path, by ``s = mix64(s ^ ((k + 1) * GOLDEN))``.  Distinct paths give
    well-separated streams; the empty path gives the stream of the avalanched
    master seed itself.
    """
    s = mix64(master & MASK64)
    for k in path:
        s = mix64((s ^ (((k + 1) * GOLDEN) & MASK64)) & MASK64)
    return s


def derive_seed_array(master: int, ids: np.ndarray) -> np.ndarray:
    """Vectorized :func:`derive_seed` for single-element paths.

    ``derive_seed_array(m, ids)[j] == derive_seed(m, int(ids[j]))`` for
    non-negative ids below 2**64.
    """
    s0 = np.uint64(mix64(master & MASK64))
    k = np.asarray(ids).astype(np.uint64) + np.uint64(1)
    return mix64_array(s0 ^ (k * np.uint64(GOLDEN)))


def u64_stream(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of the stream with the given seed."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    ctr = np.arange(1, count + 1, dtype=np.uint64)
    return mix64_array(np.uint64(seed & MASK64) + ctr * np.uint64(GOLDEN))


def u64_matrix(seeds: np.ndarray, count: int) -> np.ndarray:
    """Row ``j`` holds the first ``count`` outputs of stream ``seeds[j]``."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    seeds = np.asarray(seeds).astype(np.uint64)
    ctr = np.arange(1, count + 1, dtype=np.uint64) * np.uint64(GOLDEN)
    return mix64_array(seeds[:, None] + ctr[None, :])


def uniforms_from_u64(x: np.ndarray) -> np.ndarray:
    """Map uint64 outputs to doubles in the open interval (0, 1)."""
    return ((x >> np.uint64(11)).astype(np.float64) + 0.5) * (2.0 ** -53)


def uniforms(seed: int, count: int) -> np.ndarray:
    """``count`` uniforms on (0, 1) from the stream with the given seed."""
    return uniforms_from_u64(u64_stream(seed, count))


def bounded_from_u64(x: np.ndarray, bound: int) -> np.ndarray:
    """Map uint64 outputs to integers in ``[0, bound)``, ``bound < 2**32``.

    Computes ``(x * bound) >> 64`` exactly by splitting ``x`` into 32-bit
    halves, so the vectorized uint64 arithmetic never overflows.  Returns
    int64.
    """
    if not 1 <= bound < (1 << 32):
        raise ValueError(f"bound must be in [1, 2**32), got {bound}")
    b = np.uint64(bound)
    hi = x >> np.uint64(32)
    lo = x & np.uint64(0xFFFFFFFF)
    out = (hi * b + ((lo * b) >> np.uint64(32))) >> np.uint64(32)
    return out.astype(np.int64)


def bounded_scalar(x: int, bound: int) -> int:
    """Scalar reference for :func:`bounded_from_u64` using exact integers."""
    if not 1 <= bound < (1 << 32):
        raise ValueError(f"bound must be in [1, 2**32), got {bound}")
    return ((x & MASK64) * bound) >> 64


# Coefficients of Wichura's PPND16 rational approximations to the standard
# normal inverse CDF.  Central region |p - 0.5| <= 0.425; middle tail
# r = sqrt(-log(min(p, 1-p))) <= 5; far tail r > 5.

_A = (
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
)
_B = (
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
)
_C = (
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
)
_D = (
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_E = (
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
)
_F = (
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


def _poly(coeffs, r):
    acc = np.full_like(r, coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * r + c
    return acc


def normal_ppf(p: np.ndarray) -> np.ndarray:
    """Standard normal inverse CDF (algorithm PPND16), vectorized.

    Valid for p strictly inside (0, 1); this is guaranteed for values
    produced by :func:`uniforms`.
    """
    p = np.asarray(p, dtype=np.float64)
    q = p - 0.5
    out = np.empty_like(p)

    central = np.abs(q) <= 0.425
    if np.any(central):
        r = 0.180625 - q[central] * q[central]
        out[central] = q[central] * _poly(_A, r) / _poly(_B, r)

    tail = ~central
    if np.any(tail):
        pt = p[tail]
        r = np.sqrt(-np.log(np.minimum(pt, 1.0 - pt)))
        x = np.empty_like(r)
        near = r <= 5.0
        rn = r[near] - 1.6
        x[near] = _poly(_C, rn) / _poly(_D, rn)
        rf = r[~near] - 5.0
        x[~near] = _poly(_E, rf) / _poly(_F, rf)
        out[tail] = np.where(q[tail] < 0.0, -x, x)

    return out


def std_normals(seed: int, count: int) -> np.ndarray:
    """``count`` standard normal variates from the stream with the given seed."""
    return normal_ppf(uniforms(seed, count))


def std_normals_matrix(seeds: np.ndarray, count: int) -> np.ndarray:
    """Row ``j`` holds ``count`` standard normals from stream ``seeds[j]``."""
    return normal_ppf(uniforms_from_u64(u64_matrix(seeds, count)))


def float_to_bits(x: float) -> int:
    """Bit pattern of a double as an unsigned 64-bit integer.

    Used to fold real-valued study parameters into seed-derivation paths.
    """
    return int(np.float64(x).view(np.uint64))
