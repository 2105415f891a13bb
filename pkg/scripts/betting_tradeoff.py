#!/usr/bin/env python3
"""Expected-rate sweep over the resource-split simplex for a fixed prior.

With class prior mu = (0.5, 0.25, 0.25) on BSC(0.11, 1000) at per-class error
1e-3, sweeps lambda over a 0.01-resolution simplex grid, emits the expected
rate under the normal approximation plus the KL rate penalty per point, and
marks the argmax row. The argmax should coincide with lambda = mu.
"""

import argparse
import sys
from pathlib import Path

from umpbounds import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=Path("results/betting_tradeoff.csv"), type=Path)
    parser.add_argument("--grid", default="0.01")
    args = parser.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)

    third = repr(1 / 3)
    code = cli.main(
        [
            "tradeoff", "--channel", "bsc", "--p", "0.11", "--n", "1000",
            "--class", f"eps=1e-3,lambda={third}",
            "--class", f"eps=1e-3,lambda={third}",
            "--class", f"eps=1e-3,lambda={third}",
            "--mu", "0.5,0.25,0.25", "--grid", args.grid,
            "--out", str(args.out),
        ]
    )
    if code == 0:
        best = [
            line for line in args.out.read_text().splitlines()
            if not line.startswith("#") and line.endswith(",1")
        ]
        print(f"wrote {args.out}; argmax row: {best[0] if best else 'none'}")
    return code


if __name__ == "__main__":
    sys.exit(main())
