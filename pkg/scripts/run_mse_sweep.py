#!/usr/bin/env python3
"""Sweep block length and measure the MSE of the bootstrap variance
estimator against a simulated long-run target.

Thin wrapper over ``ustatboot mse`` at the full-scale design: n = 1024,
alpha = 0.4, 500 simulations per block length, block lengths from 2 to
512.  The oracle target is cached so reruns are cheap.
"""

import argparse
import sys

from ustatboot.cli import main as cli_main


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1024)
    parser.add_argument("--alpha", type=float, default=0.4)
    parser.add_argument("--l", type=int, nargs="*",
                        default=[2, 4, 8, 16, 32, 64, 256, 512])
    parser.add_argument("--sims", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--cache", default="artifacts/oracle_cache.json")
    parser.add_argument("--out", default="artifacts/mse_sweep")
    args = parser.parse_args(argv)

    return cli_main([
        "mse",
        "--n", str(args.n),
        "--l", *map(str, args.l),
        "--alpha", str(args.alpha),
        "--sims", str(args.sims),
        "--seed", str(args.seed),
        "--threads", str(args.threads),
        "--cache", args.cache,
        "--out", args.out,
    ])


if __name__ == "__main__":
    sys.exit(main())
