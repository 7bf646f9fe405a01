"""Maximum-eigenvalue field of the metric on the (lambda, gamma) plane.

Writes the contour CSV and prints where the largest values sit relative to
the critical lines.

    python scripts/fig1_contour.py --out fig1.csv --jobs 4
"""
import argparse
import time

import numpy as np

from qcbxy.cli import main as cli_main
from qcbxy.cli import contour_grid
from qcbxy.metric import EvaluationScheme


def summarize(lams, gammas, field):
    L, G = np.meshgrid(lams, gammas, indexing="ij")
    ridge = (np.abs(np.abs(L) - 1) <= 0.05 + 1e-12) | ((np.abs(G) <= 0.0125 + 1e-12) & (np.abs(L) < 1))
    on_line = (np.abs(np.abs(L) - 1) < 1e-9) | ((G == 0) & (np.abs(L) < 1))
    top = field >= np.quantile(field, 0.9)
    print(f"top decile: {top.sum()} cells, {np.sum(top & ~ridge)} off the critical bands")
    print(f"cells available inside the bands: {ridge.sum()}")
    print(f"median on critical lines {np.median(field[on_line]):.4g}, "
          f"off-critical median {np.median(field[~ridge]):.4g}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=float, default=1e-2)
    ap.add_argument("--n-lambda", type=int, default=121)
    ap.add_argument("--n-gamma", type=int, default=81)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="fig1_contour.csv")
    args = ap.parse_args()

    t0 = time.perf_counter()
    code = cli_main(["contour", "--T", str(args.T), "--lambda-range", "-1.5", "1.5",
                     str(args.n_lambda), "--gamma-range", "-1", "1", str(args.n_gamma),
                     "--cap", "none", "--jobs", str(args.jobs), "--out", args.out])
    print(f"wrote {args.out} in {time.perf_counter() - t0:.1f} s (exit {code})")

    lams = np.linspace(-1.5, 1.5, args.n_lambda)
    gammas = np.linspace(-1.0, 1.0, args.n_gamma)
    data = np.loadtxt(args.out, delimiter=",", skiprows=1)
    summarize(lams, gammas, data[:, 3].reshape(len(lams), len(gammas)))


if __name__ == "__main__":
    main()
