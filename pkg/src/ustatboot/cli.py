"""Command-line interface.

Subcommands
-----------
generate   write an AR(1) series to a file (one value per line)
ci         confidence interval for a series file by one resampling method
coverage   coverage study over a grid of (n, l, alpha) cells
curve      coverage versus block length at fixed n and alpha (CSV/JSON/SVG)
mse        MSE study of the closed-form bootstrap variance estimator
bench      kernel-evaluation cost accounting for the two bootstraps

Exit codes: 0 success, 2 usage error, 3 invalid data or parameters,
4 numeric guard tripped.  Worker count comes from --threads, falling back
to the USTAT_THREADS environment variable, then 1.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import asdict

from ustatboot import artifacts
from ustatboot.blocks import BlockScheme, block_u_stats
from ustatboot.dgp import Ar1Config, ar1_generate
from ustatboot.experiments import (
    BenchConfig,
    CoverageConfig,
    MseConfig,
    run_benchmark,
    run_coverage,
    run_mse,
)
from ustatboot.kernels import KERNELS, Sample, u_statistic
from ustatboot.resample import (
    EnumerationGuardError,
    Method,
    confidence_interval,
    new_bootstrap,
    plug_in_bootstrap,
    subsampling_distribution,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

_METHOD_CHOICES = ("new", "plugin", "subsample")
_SCHEME_CHOICES = tuple(s.value for s in BlockScheme)


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("USTAT_THREADS", "1")))
    except ValueError:
        return 1


def _add_threads(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--threads",
        type=int,
        default=_default_threads(),
        help="worker processes (default: USTAT_THREADS or 1); results do not depend on this",
    )


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ustatboot",
        description="Block resampling for U-statistics of dependent time series.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write an AR(1) series to a file")
    p.add_argument("--alpha", type=float, required=True, help="AR(1) coefficient, |alpha| < 1")
    p.add_argument("--n", type=int, required=True, help="series length")
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output path, one value per line")

    p = sub.add_parser("ci", help="confidence interval for a series file")
    p.add_argument("--in", dest="infile", required=True, help="series file, one value per line")
    p.add_argument("--kernel", choices=tuple(sorted(KERNELS)), default="variance")
    p.add_argument("--method", choices=_METHOD_CHOICES, default="new")
    p.add_argument("--scheme", choices=_SCHEME_CHOICES, default="circular")
    p.add_argument("--l", type=int, required=True, help="block length")
    p.add_argument("--B", type=int, default=500, help="bootstrap replicates")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json-out", default=None, help="also write the interval as JSON")

    p = sub.add_parser("coverage", help="coverage study over an (n, l, alpha) grid")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--l", type=int, nargs="+", required=True)
    p.add_argument("--alpha", type=float, nargs="+", required=True)
    p.add_argument("--methods", nargs="+", choices=_METHOD_CHOICES, default=list(_METHOD_CHOICES))
    p.add_argument("--scheme", choices=_SCHEME_CHOICES, default="circular")
    p.add_argument("--kernel", choices=tuple(sorted(KERNELS)), default="variance")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--sims", type=int, default=2000)
    p.add_argument("--B", type=int, default=500)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="artifact prefix; writes PREFIX.csv and PREFIX.json")
    _add_threads(p)

    p = sub.add_parser("curve", help="coverage versus block length at fixed n and alpha")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--l", type=int, nargs="*", default=[], help="block lengths (may be empty)")
    p.add_argument("--methods", nargs="+", choices=_METHOD_CHOICES, default=list(_METHOD_CHOICES))
    p.add_argument("--scheme", choices=_SCHEME_CHOICES, default="circular")
    p.add_argument("--kernel", choices=tuple(sorted(KERNELS)), default="variance")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--sims", type=int, default=2000)
    p.add_argument("--B", type=int, default=500)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="prefix; writes PREFIX.csv, PREFIX.json, PREFIX.svg")
    _add_threads(p)

    p = sub.add_parser("mse", help="MSE of the closed-form bootstrap variance estimator")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--l", type=int, nargs="+", required=True)
    p.add_argument("--alpha", type=float, default=0.4)
    p.add_argument("--kernel", choices=tuple(sorted(KERNELS)), default="variance")
    p.add_argument("--scheme", choices=_SCHEME_CHOICES, default="circular")
    p.add_argument("--sims", type=int, default=500)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle-sims", type=int, default=100_000)
    p.add_argument("--oracle-seed", type=int, default=424243)
    p.add_argument("--cache", default=None, help="JSON cache for oracle targets")
    p.add_argument("--out", required=True, help="prefix; writes PREFIX.csv and PREFIX.json")
    _add_threads(p)

    p = sub.add_parser("bench", help="kernel-evaluation cost accounting")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--l", type=int, nargs="*", default=None,
                   help="block lengths (default: l = max(2, round(sqrt(n))) per n)")
    p.add_argument("--B", type=int, default=500)
    p.add_argument("--kernel", choices=tuple(sorted(KERNELS)), default="variance")
    p.add_argument("--scheme", choices=_SCHEME_CHOICES, default="circular")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="prefix; writes PREFIX.csv and PREFIX.json")

    return top


def _cmd_generate(args) -> int:
    cfg = Ar1Config(alpha=args.alpha, n=args.n, burn_in=args.burn_in, seed=args.seed)
    sample = ar1_generate(cfg)
    artifacts.write_series(args.out, sample.values)
    print(f"wrote {args.out} (n={cfg.n}, alpha={cfg.alpha!r}, seed={cfg.seed})")
    return EXIT_OK


def _cmd_ci(args) -> int:
    values = artifacts.read_series(args.infile)
    sample = Sample(values)
    kern = KERNELS[args.kernel]
    scheme = BlockScheme(args.scheme)
    point = u_statistic(sample, kern)
    if not math.isfinite(point):
        raise FloatingPointError(
            "non-finite point estimate; input magnitudes overflow the kernel"
        )
    if args.method == "new":
        stats = block_u_stats(sample, kern, scheme, args.l)
        reps = new_bootstrap(stats, args.B, args.seed)
    elif args.method == "plugin":
        reps = plug_in_bootstrap(sample, kern, scheme, args.l, args.B, args.seed)
    else:
        reps = subsampling_distribution(sample, kern, scheme, args.l)
    ci = confidence_interval(point, reps, sample.n, args.level)
    if not (math.isfinite(ci.lower) and math.isfinite(ci.upper) and math.isfinite(point)):
        raise FloatingPointError("non-finite interval; check the input series")
    print(f"point={point!r}")
    print(f"lower={ci.lower!r}")
    print(f"upper={ci.upper!r}")
    print(
        f"method={args.method} scheme={scheme.value} kernel={kern.name} "
        f"n={sample.n} l={reps.l} m={reps.m} B={reps.num_replicates} "
        f"level={args.level!r} seed={reps.seed}"
    )
    if args.json_out:
        import json

        payload = {
            "point": point,
            "lower": ci.lower,
            "upper": ci.upper,
            "level": args.level,
            "method": args.method,
            "scheme": scheme.value,
            "kernel": kern.name,
            "n": sample.n,
            "l": reps.l,
            "m": reps.m,
            "B": reps.num_replicates,
            "seed": reps.seed,
        }
        artifacts.atomic_write_text(
            args.json_out, json.dumps(payload, sort_keys=True, indent=2) + "\n"
        )
        print(f"wrote {args.json_out}")
    return EXIT_OK


def _coverage_config(args, n_values, l_values, alphas) -> CoverageConfig:
    return CoverageConfig(
        n_values=tuple(n_values),
        l_values=tuple(l_values),
        alphas=tuple(alphas),
        methods=tuple(Method(m) for m in args.methods),
        scheme=BlockScheme(args.scheme),
        kernel=args.kernel,
        level=args.level,
        num_sims=args.sims,
        num_replicates=args.B,
        burn_in=args.burn_in,
        master_seed=args.seed,
        threads=args.threads,
    )


def _emit_coverage(report, prefix: str, kind: str, with_svg: bool) -> None:
    artifacts.atomic_write_text(prefix + ".csv", artifacts.coverage_csv_text(report.records))
    artifacts.atomic_write_text(
        prefix + ".json",
        artifacts.report_json_text(kind, report.config,
                                   artifacts.coverage_record_dicts(report.records)),
    )
    written = [prefix + ".csv", prefix + ".json"]
    if with_svg:
        cfg = report.config
        title = (
            f"coverage vs block length (n={cfg.n_values[0]}, alpha={cfg.alphas[0]!r}, "
            f"level={cfg.level!r})"
        )
        artifacts.atomic_write_text(
            prefix + ".svg",
            artifacts.coverage_curve_svg(report.records, cfg.level, title),
        )
        written.append(prefix + ".svg")
    for r in report.records:
        if r.error is not None:
            print(f"{r.method} n={r.n} l={r.l} alpha={r.alpha!r}: error: {r.error}")
        else:
            print(
                f"{r.method} n={r.n} l={r.l} alpha={r.alpha!r}: "
                f"coverage={r.coverage!r} mean_width={r.mean_width!r}"
            )
    for path in written:
        print(f"wrote {path}")


def _cmd_coverage(args) -> int:
    cfg = _coverage_config(args, args.n, args.l, args.alpha)
    report = run_coverage(cfg)
    _emit_coverage(report, args.out, "coverage", with_svg=False)
    return EXIT_OK


def _cmd_curve(args) -> int:
    cfg = _coverage_config(args, [args.n], args.l, [args.alpha])
    report = run_coverage(cfg)
    _emit_coverage(report, args.out, "curve", with_svg=True)
    return EXIT_OK


def _cmd_mse(args) -> int:
    cfg = MseConfig(
        n_values=tuple(args.n),
        l_values=tuple(args.l),
        alpha=args.alpha,
        kernel=args.kernel,
        scheme=BlockScheme(args.scheme),
        num_sims=args.sims,
        burn_in=args.burn_in,
        master_seed=args.seed,
        oracle_sims=args.oracle_sims,
        oracle_seed=args.oracle_seed,
        cache_path=args.cache,
        threads=args.threads,
    )
    report = run_mse(cfg)
    artifacts.atomic_write_text(args.out + ".csv", artifacts.mse_csv_text(report.records))
    artifacts.atomic_write_text(
        args.out + ".json",
        artifacts.report_json_text("mse", cfg, [asdict(r) for r in report.records]),
    )
    for r in report.records:
        if r.error is not None:
            print(f"n={r.n} l={r.l}: error: {r.error}")
        else:
            print(f"n={r.n} l={r.l}: mse={r.mse!r} se={r.se!r} target={r.target_var!r}")
    print(f"wrote {args.out}.csv")
    print(f"wrote {args.out}.json")
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfg = BenchConfig(
        n_values=tuple(args.n),
        l_values=None if args.l is None else tuple(args.l),
        num_replicates=args.B,
        kernel=args.kernel,
        scheme=BlockScheme(args.scheme),
        master_seed=args.seed,
    )
    report = run_benchmark(cfg)
    artifacts.atomic_write_text(args.out + ".csv", artifacts.bench_csv_text(report.records))
    artifacts.atomic_write_text(
        args.out + ".json",
        artifacts.report_json_text("bench", cfg, artifacts.bench_record_dicts(report.records)),
    )
    for r in report.records:
        print(
            f"n={r.n} l={r.l} m={r.m}: precompute {r.precompute_evals} evals "
            f"({r.precompute_seconds:.4f}s); per replicate: new 0 evals "
            f"({r.new_seconds / r.num_replicates:.6f}s), plugin "
            f"{r.plugin_evals_per_replicate} evals ({r.plugin_seconds / r.num_replicates:.6f}s)"
        )
    print(f"wrote {args.out}.csv")
    print(f"wrote {args.out}.json")
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "ci": _cmd_ci,
    "coverage": _cmd_coverage,
    "curve": _cmd_curve,
    "mse": _cmd_mse,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (EnumerationGuardError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
