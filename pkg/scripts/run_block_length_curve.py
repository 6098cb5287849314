#!/usr/bin/env python3
"""Plot empirical coverage against block length at one (n, alpha).

Thin wrapper over ``ustatboot curve`` with a ready-made ladder of block
lengths; writes CSV, JSON, and an SVG plot under the chosen prefix.
"""

import argparse
import sys

from ustatboot.cli import main as cli_main


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=200)
    parser.add_argument("--alpha", type=float, default=0.4)
    parser.add_argument("--l", type=int, nargs="*",
                        default=[2, 3, 5, 8, 12, 20, 33, 50])
    parser.add_argument("--sims", type=int, default=1000)
    parser.add_argument("--B", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", default="artifacts/block_length_curve")
    args = parser.parse_args(argv)

    return cli_main([
        "curve",
        "--n", str(args.n),
        "--alpha", str(args.alpha),
        "--l", *map(str, args.l),
        "--sims", str(args.sims),
        "--B", str(args.B),
        "--seed", str(args.seed),
        "--threads", str(args.threads),
        "--out", args.out,
    ])


if __name__ == "__main__":
    sys.exit(main())
