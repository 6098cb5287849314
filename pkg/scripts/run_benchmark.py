#!/usr/bin/env python3
"""Count kernel evaluations for the block-value bootstrap versus the
plug-in bootstrap across sample sizes.

Thin wrapper over ``ustatboot bench``.  Exact counts go to CSV/JSON;
wall-clock times are printed but deliberately kept out of the artifacts
because they are not reproducible.
"""

import argparse
import sys

from ustatboot.cli import main as cli_main


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+",
                        default=[100, 200, 400, 800, 1600])
    parser.add_argument("--l", type=int, nargs="*", default=None,
                        help="block lengths; default: square-root rule per n")
    parser.add_argument("--B", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="artifacts/benchmark")
    args = parser.parse_args(argv)

    argv_out = [
        "bench",
        "--n", *map(str, args.n),
        "--B", str(args.B),
        "--seed", str(args.seed),
        "--out", args.out,
    ]
    if args.l is not None:
        argv_out += ["--l", *map(str, args.l)]
    return cli_main(argv_out)


if __name__ == "__main__":
    sys.exit(main())
