"""Simulation studies: interval coverage, variance-estimator MSE, and cost
accounting for the three resampling methods.

Seeding discipline
------------------
Every study derives seeds along a fixed tree so that results are
bit-identical for a given master seed, regardless of worker count or
chunking:

* coverage cell (n, l, alpha):   cell_seed = derive_seed(master, n, l, bits(alpha))
* simulation s of a cell:        sim_seed  = derive_seed(cell_seed, s)
* series draw / method streams:  derive_seed(sim_seed, 0 | 1 | 2)
  (0 = data, 1 = statistic-level bootstrap, 2 = plug-in bootstrap)

All interval methods within a simulation share the same series (common
random numbers), and the MSE study reuses the same simulated series across
all block lengths for a given n.

Workers return per-simulation arrays that are assembled by global simulation
index before any averaging, so aggregates never depend on how simulations
were split across processes.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ustatboot.blocks import BlockScheme, block_count, block_u_stats
from ustatboot.dgp import Ar1Config, ar1_generate, ar1_generate_batch, true_theta_variance_kernel
from ustatboot.kernels import KERNELS, CountingKernel, Sample, u_statistic
from ustatboot.resample import (
    Method,
    bootstrap_variance_closed_form,
    confidence_interval,
    new_bootstrap,
    plug_in_bootstrap,
    subsampling_distribution,
)
from ustatboot.rng import derive_seed, derive_seed_array, float_to_bits

DEFAULT_METHODS = (Method.PLUG_IN, Method.NEW_BOOTSTRAP, Method.SUBSAMPLING)


def _true_target(kernel_name: str, alpha: float) -> float:
    """Population value estimated by the kernel's U-statistic under AR(1)."""
    if kernel_name == "variance":
        return true_theta_variance_kernel(alpha)
    if kernel_name == "additive":
        return 0.0
    raise ValueError(f"no known target for kernel {kernel_name!r}")


def _chunk_ranges(total: int, threads: int) -> list[tuple[int, int]]:
    if total == 0:
        return []
    pieces = max(1, min(total, threads * 4))
    step = math.ceil(total / pieces)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


# ---------------------------------------------------------------------------
# Coverage study
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverageConfig:
    """Grid and sampling plan for a coverage study.

    The grid is the cartesian product of n_values, l_values, and alphas;
    each cell is simulated num_sims times at the given interval level with
    num_replicates bootstrap replicates.
    """

    n_values: tuple[int, ...]
    l_values: tuple[int, ...]
    alphas: tuple[float, ...]
    methods: tuple[Method, ...] = DEFAULT_METHODS
    scheme: BlockScheme = BlockScheme.CIRCULAR
    kernel: str = "variance"
    level: float = 0.95
    num_sims: int = 2000
    num_replicates: int = 500
    burn_in: int = 1000
    master_seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must be in (0, 1), got {self.level}")
        if self.num_sims < 1:
            raise ValueError(f"num_sims must be >= 1, got {self.num_sims}")
        if self.num_replicates < 1:
            raise ValueError(f"num_replicates must be >= 1, got {self.num_replicates}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if not self.methods:
            raise ValueError("at least one method is required")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("duplicate methods in config")
        if self.kernel not in KERNELS:
            raise ValueError(f"unknown kernel {self.kernel!r}; known: {sorted(KERNELS)}")
        for a in self.alphas:
            if not abs(a) < 1.0:
                raise ValueError(f"stationarity requires |alpha| < 1, got alpha={a}")
        for n in self.n_values:
            if n < 2:
                raise ValueError(f"series length must be >= 2, got {n}")
        for l in self.l_values:
            if l < 2:
                raise ValueError(f"block length must be >= 2, got {l}")


@dataclass(frozen=True)
class CellResult:
    """Coverage outcome of one (method, n, l, alpha) cell."""

    method: str
    n: int
    l: int
    alpha: float
    level: float
    coverage: float | None
    mean_width: float | None
    num_sims: int
    num_replicates: int
    seed: int
    error: str | None = None


@dataclass(frozen=True)
class CoverageReport:
    config: CoverageConfig
    records: tuple[CellResult, ...]


def _coverage_chunk(payload):
    """Simulate sims [lo, hi) of one cell; returns (covered, widths) arrays."""
    (n, l, alpha, level, num_replicates, method_values, scheme_value, kernel_name,
     burn_in, cell_seed, lo, hi, factory, true_value) = payload
    kern = KERNELS[kernel_name]
    scheme = BlockScheme(scheme_value)
    methods = [Method(v) for v in method_values]
    theta = _true_target(kernel_name, alpha) if true_value is None else true_value
    needs_stats = any(m in (Method.NEW_BOOTSTRAP, Method.SUBSAMPLING) for m in methods)

    covered = np.zeros((hi - lo, len(methods)), dtype=np.uint8)
    widths = np.zeros((hi - lo, len(methods)))
    for s in range(lo, hi):
        sim_seed = derive_seed(cell_seed, s)
        series_seed = derive_seed(sim_seed, 0)
        if factory is None:
            sample = ar1_generate(Ar1Config(alpha=alpha, n=n, burn_in=burn_in, seed=series_seed))
        else:
            sample = Sample(factory(n, alpha, series_seed))
        point = u_statistic(sample, kern)
        stats = block_u_stats(sample, kern, scheme, l) if needs_stats else None
        for j, meth in enumerate(methods):
            if meth is Method.NEW_BOOTSTRAP:
                reps = new_bootstrap(stats, num_replicates, derive_seed(sim_seed, 1))
            elif meth is Method.PLUG_IN:
                reps = plug_in_bootstrap(
                    sample, kern, scheme, l, num_replicates, derive_seed(sim_seed, 2)
                )
            elif meth is Method.SUBSAMPLING:
                reps = subsampling_distribution(sample, kern, scheme, l, stats=stats, point=point)
            else:
                raise ValueError(f"method {meth} is not part of coverage studies")
            ci = confidence_interval(point, reps, n, level)
            covered[s - lo, j] = ci.covers(theta)
            widths[s - lo, j] = ci.width
    return covered, widths


def run_coverage(cfg: CoverageConfig, *, series_factory=None, true_value=None) -> CoverageReport:
    """Run the coverage study over the config grid.

    ``series_factory(n, alpha, seed) -> array`` replaces the AR(1) generator
    and ``true_value`` the implied target; both are testing hooks and
    require threads == 1 (factories are not shipped to worker processes).
    Cells whose block length does not satisfy 2 <= l <= n produce records
    with an ``error`` message instead of raising.
    """
    if series_factory is not None and cfg.threads != 1:
        raise ValueError("series_factory requires threads == 1")
    records: list[CellResult] = []
    pool = ProcessPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else None
    try:
        for n in cfg.n_values:
            for l in cfg.l_values:
                for alpha in cfg.alphas:
                    records.extend(
                        _run_coverage_cell(cfg, n, l, alpha, pool, series_factory, true_value)
                    )
    finally:
        if pool is not None:
            pool.shutdown()
    return CoverageReport(config=cfg, records=tuple(records))


def _run_coverage_cell(cfg, n, l, alpha, pool, series_factory, true_value):
    base = dict(
        n=n, l=l, alpha=alpha, level=cfg.level, num_sims=cfg.num_sims,
        num_replicates=cfg.num_replicates, seed=cfg.master_seed,
    )
    try:
        block_count(cfg.scheme, n, l)
    except ValueError as exc:
        return [
            CellResult(method=m.value, coverage=None, mean_width=None, error=str(exc), **base)
            for m in cfg.methods
        ]
    cell_seed = derive_seed(cfg.master_seed, n, l, float_to_bits(alpha))
    method_values = tuple(m.value for m in cfg.methods)
    payloads = [
        (n, l, alpha, cfg.level, cfg.num_replicates, method_values, cfg.scheme.value,
         cfg.kernel, cfg.burn_in, cell_seed, lo, hi, series_factory, true_value)
        for lo, hi in _chunk_ranges(cfg.num_sims, cfg.threads)
    ]
    covered = np.zeros((cfg.num_sims, len(cfg.methods)), dtype=np.uint8)
    widths = np.zeros((cfg.num_sims, len(cfg.methods)))
    if pool is None:
        results = [_coverage_chunk(p) for p in payloads]
    else:
        results = [f.result() for f in [pool.submit(_coverage_chunk, p) for p in payloads]]
    for p, (cov, wid) in zip(payloads, results):
        lo, hi = p[10], p[11]
        covered[lo:hi] = cov
        widths[lo:hi] = wid
    out = []
    for j, meth in enumerate(cfg.methods):
        out.append(
            CellResult(
                method=meth.value,
                coverage=float(covered[:, j].mean()),
                mean_width=float(widths[:, j].mean()),
                **base,
            )
        )
    return out


def run_block_length_curve(
    n: int, alpha: float, l_values: tuple[int, ...], **overrides
) -> CoverageReport:
    """Coverage as a function of block length at fixed n and alpha."""
    cfg = CoverageConfig(
        n_values=(n,), l_values=tuple(l_values), alphas=(alpha,), **overrides
    )
    return run_coverage(cfg)


# ---------------------------------------------------------------------------
# MSE of the closed-form bootstrap variance estimator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MseConfig:
    """Plan for the mean-squared-error study of l * popvar(block values)
    as an estimator of the long-run variance of sqrt(n) * U_n."""

    n_values: tuple[int, ...]
    l_values: tuple[int, ...]
    alpha: float = 0.4
    kernel: str = "variance"
    scheme: BlockScheme = BlockScheme.CIRCULAR
    num_sims: int = 500
    burn_in: int = 1000
    master_seed: int = 0
    oracle_sims: int = 100_000
    oracle_seed: int = 424243
    cache_path: str | None = None
    threads: int = 1

    def __post_init__(self):
        if not abs(self.alpha) < 1.0:
            raise ValueError(f"stationarity requires |alpha| < 1, got alpha={self.alpha}")
        if self.kernel not in KERNELS:
            raise ValueError(f"unknown kernel {self.kernel!r}; known: {sorted(KERNELS)}")
        if self.num_sims < 2:
            raise ValueError(f"num_sims must be >= 2 for an SE, got {self.num_sims}")
        if self.oracle_sims < 2:
            raise ValueError(f"oracle_sims must be >= 2, got {self.oracle_sims}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


@dataclass(frozen=True)
class MseRecord:
    n: int
    l: int
    alpha: float
    num_sims: int
    mse: float | None
    se: float | None
    target_var: float | None
    seed: int
    error: str | None = None


@dataclass(frozen=True)
class MseReport:
    config: MseConfig
    records: tuple[MseRecord, ...]


def oracle_long_run_variance(
    n: int,
    alpha: float,
    kernel_name: str = "variance",
    num_sims: int = 100_000,
    seed: int = 424243,
) -> float:
    """Monte Carlo value of Var(sqrt(n) * U_n) under the AR(1) process.

    Uses the closed collapsed form of the U-statistic (sample variance with
    ddof=1 for the variance kernel, sample mean for the additive kernel), a
    route independent of the pairwise evaluators.  Rows draw exact
    stationary initial states, so no burn-in is needed.  Row r uses seed
    derive_seed(seed, n, bits(alpha), r); results do not depend on batching.
    """
    base = derive_seed(seed, n, float_to_bits(alpha))
    vals = np.empty(num_sims)
    batch = max(1, 4_000_000 // (n + 1))
    for lo in range(0, num_sims, batch):
        hi = min(lo + batch, num_sims)
        rows = ar1_generate_batch(alpha, n, 0, derive_seed_array(base, np.arange(lo, hi)))
        if kernel_name == "variance":
            vals[lo:hi] = np.var(rows, axis=1, ddof=1)
        elif kernel_name == "additive":
            vals[lo:hi] = rows.mean(axis=1)
        else:
            raise ValueError(f"no collapsed form for kernel {kernel_name!r}")
    return float(n * np.var(vals, ddof=1))


def _oracle_cached(cfg: MseConfig, n: int) -> float:
    key = (
        f"{cfg.kernel}|n={n}|alpha={cfg.alpha!r}|sims={cfg.oracle_sims}|seed={cfg.oracle_seed}"
    )
    cache: dict = {}
    if cfg.cache_path and os.path.exists(cfg.cache_path):
        with open(cfg.cache_path, "r", encoding="utf-8") as fh:
            cache = json.load(fh)
        if key in cache:
            return float(cache[key])
    value = oracle_long_run_variance(n, cfg.alpha, cfg.kernel, cfg.oracle_sims, cfg.oracle_seed)
    if cfg.cache_path:
        cache[key] = value
        from ustatboot.artifacts import atomic_write_text

        atomic_write_text(
            cfg.cache_path, json.dumps(cache, sort_keys=True, indent=2) + "\n"
        )
    return value


def _mse_chunk(payload):
    """Var-star for sims [lo, hi) of one n; returns an (hi-lo, len(ls)) array."""
    n, alpha, ls, kernel_name, scheme_value, burn_in, cell_seed, lo, hi, factory = payload
    kern = KERNELS[kernel_name]
    scheme = BlockScheme(scheme_value)
    out = np.zeros((hi - lo, len(ls)))
    for s in range(lo, hi):
        sim_seed = derive_seed(cell_seed, s)
        series_seed = derive_seed(sim_seed, 0)
        if factory is None:
            sample = ar1_generate(Ar1Config(alpha=alpha, n=n, burn_in=burn_in, seed=series_seed))
        else:
            sample = Sample(factory(n, alpha, series_seed))
        for j, l in enumerate(ls):
            stats = block_u_stats(sample, kern, scheme, l)
            out[s - lo, j] = bootstrap_variance_closed_form(stats)
    return out


def run_mse(cfg: MseConfig, *, series_factory=None, target_override=None) -> MseReport:
    """MSE of the closed-form bootstrap variance against the oracle target.

    For each n, the same simulated series feed every block length (common
    random numbers), so MSE comparisons across l are paired.  Invalid cells
    (l outside [2, n]) yield records with an ``error`` message.

    ``series_factory(n, alpha, seed) -> array`` replaces the AR(1) generator
    and ``target_override`` replaces the long-run variance oracle; both are
    testing hooks, and the factory requires threads == 1.
    """
    if series_factory is not None and cfg.threads != 1:
        raise ValueError("series_factory requires threads == 1")
    records: list[MseRecord] = []
    pool = ProcessPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else None
    try:
        for n in cfg.n_values:
            target = _oracle_cached(cfg, n) if target_override is None else float(target_override)
            valid = [l for l in cfg.l_values if 2 <= l <= n]
            var_star = np.zeros((cfg.num_sims, len(valid)))
            if valid:
                cell_seed = derive_seed(cfg.master_seed, n, float_to_bits(cfg.alpha))
                payloads = [
                    (n, cfg.alpha, tuple(valid), cfg.kernel, cfg.scheme.value,
                     cfg.burn_in, cell_seed, lo, hi, series_factory)
                    for lo, hi in _chunk_ranges(cfg.num_sims, cfg.threads)
                ]
                if pool is None:
                    results = [_mse_chunk(p) for p in payloads]
                else:
                    results = [f.result() for f in [pool.submit(_mse_chunk, p) for p in payloads]]
                for p, block in zip(payloads, results):
                    var_star[p[7] : p[8]] = block
            col = {l: j for j, l in enumerate(valid)}
            for l in cfg.l_values:
                if l not in col:
                    records.append(
                        MseRecord(
                            n=n, l=l, alpha=cfg.alpha, num_sims=cfg.num_sims,
                            mse=None, se=None, target_var=None, seed=cfg.master_seed,
                            error=f"block length must satisfy 2 <= l <= n, got l={l}, n={n}",
                        )
                    )
                    continue
                sq = (var_star[:, col[l]] - target) ** 2
                records.append(
                    MseRecord(
                        n=n, l=l, alpha=cfg.alpha, num_sims=cfg.num_sims,
                        mse=float(sq.mean()),
                        se=float(sq.std(ddof=1) / math.sqrt(cfg.num_sims)),
                        target_var=target, seed=cfg.master_seed,
                    )
                )
    finally:
        if pool is not None:
            pool.shutdown()
    return MseReport(config=cfg, records=tuple(records))


# ---------------------------------------------------------------------------
# Cost accounting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchConfig:
    """Plan for the kernel-evaluation cost comparison.

    If l_values is None, each n uses the square-root rule
    l = max(2, round(sqrt(n))).
    """

    n_values: tuple[int, ...]
    l_values: tuple[int, ...] | None = None
    num_replicates: int = 500
    kernel: str = "variance"
    scheme: BlockScheme = BlockScheme.CIRCULAR
    alpha: float = 0.2
    burn_in: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise ValueError(f"unknown kernel {self.kernel!r}; known: {sorted(KERNELS)}")
        if self.num_replicates < 1:
            raise ValueError(f"num_replicates must be >= 1, got {self.num_replicates}")
        if not abs(self.alpha) < 1.0:
            raise ValueError(f"stationarity requires |alpha| < 1, got alpha={self.alpha}")


@dataclass(frozen=True)
class BenchRecord:
    """Exact kernel-evaluation counts (and informational wall times) for one
    (n, l) size.  Counts are measured by instrumentation, then checked
    against the closed forms; times are excluded from artifacts because they
    are not reproducible."""

    n: int
    l: int
    m: int
    num_replicates: int
    precompute_evals: int
    new_evals_per_replicate: int
    plugin_evals_per_replicate: int
    precompute_seconds: float
    new_seconds: float
    plugin_seconds: float
    seed: int


@dataclass(frozen=True)
class BenchReport:
    config: BenchConfig
    records: tuple[BenchRecord, ...]


def run_benchmark(cfg: BenchConfig) -> BenchReport:
    """Measure kernel-evaluation counts and wall time for both bootstraps.

    Asserts the instrumented counts exactly: the block precompute costs
    num_blocks * l*(l-1)/2 evaluations, the statistic-level bootstrap costs
    zero, and the plug-in bootstrap costs m*l*(m*l-1)/2 per replicate.
    """
    records = []
    for n in cfg.n_values:
        if cfg.l_values is None:
            ls: tuple[int, ...] = (max(2, round(math.sqrt(n))),)
        else:
            ls = cfg.l_values
        for l in ls:
            nb = block_count(cfg.scheme, n, l)
            m = n // l
            ml = m * l
            seed = derive_seed(cfg.master_seed, n, l)
            sample = ar1_generate(
                Ar1Config(alpha=cfg.alpha, n=n, burn_in=cfg.burn_in, seed=derive_seed(seed, 0))
            )
            ck = CountingKernel(KERNELS[cfg.kernel])

            t0 = time.perf_counter()
            stats = block_u_stats(sample, ck, cfg.scheme, l)
            t1 = time.perf_counter()
            precompute_evals = ck.evals
            assert precompute_evals == nb * l * (l - 1) // 2

            ck.reset()
            new_bootstrap(stats, cfg.num_replicates, derive_seed(seed, 1))
            t2 = time.perf_counter()
            assert ck.evals == 0

            ck.reset()
            plug_in_bootstrap(sample, ck, cfg.scheme, l, cfg.num_replicates, derive_seed(seed, 2))
            t3 = time.perf_counter()
            plugin_total = ck.evals
            assert plugin_total == cfg.num_replicates * (ml * (ml - 1) // 2)

            records.append(
                BenchRecord(
                    n=n, l=l, m=m, num_replicates=cfg.num_replicates,
                    precompute_evals=precompute_evals,
                    new_evals_per_replicate=0,
                    plugin_evals_per_replicate=ml * (ml - 1) // 2,
                    precompute_seconds=t1 - t0,
                    new_seconds=t2 - t1,
                    plugin_seconds=t3 - t2,
                    seed=cfg.master_seed,
                )
            )
    return BenchReport(config=cfg, records=tuple(records))
