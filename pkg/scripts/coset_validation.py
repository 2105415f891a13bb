#!/usr/bin/env python3
"""Monte Carlo validation of the union-of-coset construction on BEC(0.5).

Builds 20 independently seeded two-class coset codebooks (k=8 and k=4 over
n=64, even split) and checks the pooled empirical class errors against the
analytic DT bounds at three aggregate standard errors. Exit code 4 means the
check failed.
"""

import argparse
import sys
from pathlib import Path

from umpbounds import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=Path("results/coset_validation.csv"), type=Path)
    parser.add_argument("--trials", default="100000")
    parser.add_argument("--codebooks", default="20")
    parser.add_argument("--seed", default="20260811")
    args = parser.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)

    code = cli.main(
        [
            "simulate", "--channel", "bec", "--p", "0.5", "--n", "64",
            "--class", "k=8,lambda=0.5", "--class", "k=4,lambda=0.5",
            "--trials", args.trials, "--codebooks", args.codebooks,
            "--seed", args.seed, "--out", str(args.out),
        ]
    )
    print(f"wrote {args.out} (exit {code})")
    return code


if __name__ == "__main__":
    sys.exit(main())
