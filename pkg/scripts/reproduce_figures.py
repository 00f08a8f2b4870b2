"""Write the six Wigner panels (n = 0, 1 at t = 0 undamped, t = 1 and t = 3 damped).

    python3 scripts/reproduce_figures.py [out_dir] [--gamma 0.5] [--resolution 201]

Thin wrapper over the CLI ``figure`` command; grids are plot-ready CSV/JSON.
"""
import argparse
import sys

from fresnelck.cli import main

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("out_dir", nargs="?", default="figures")
    ap.add_argument("--gamma", default="0.5")
    ap.add_argument("--resolution", default="201")
    args = ap.parse_args()
    sys.exit(main(["figure", "--out-dir", args.out_dir, "--gamma", args.gamma, "--resolution", args.resolution]))
