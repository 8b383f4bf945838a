#!/usr/bin/env python3
"""Export CSV point clouds for the built-in hypersurface families.

One file per family; the columns are the base parameter, the ruling
parameter, the leaf coordinates, and the interleaved real coordinates of the
canonical representative. Plotting tools downstream consume the CSV directly.
"""

import argparse
import sys
from pathlib import Path

from pseudocp.cli import main as cli_main
from pseudocp.examples import EXAMPLE_IDS


def run(out_dir: str, grid: str) -> int:
    target = Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    for ex in EXAMPLE_IDS:
        path = target / f"family{ex}.csv"
        code = cli_main(
            ["sample", str(ex), "--grid", grid, "--format", "csv", "--out", str(path)]
        )
        if code != 0:
            return code
        rows = sum(1 for _ in path.open()) - 1
        print(f"family {ex}: {rows} points -> {path}")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="pointclouds")
    parser.add_argument("--grid", default="6x6x4")
    args = parser.parse_args()
    sys.exit(run(args.out_dir, args.grid))
