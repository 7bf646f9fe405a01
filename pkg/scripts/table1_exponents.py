"""Quasi-classical temperature exponents at one point in each gapped region.

The default window is beta*gap in [20, 500]. --depth shifts it deeper
(beta*gap in [20, 500] times the factor), where subleading corrections fade.

    python scripts/table1_exponents.py
    python scripts/table1_exponents.py --depth 100
"""
import argparse

from qcbxy.scaling import expected_check, fit_all, sweep_temperature
from qcbxy.xy_model import CouplingPoint, gap

POINTS = {"A": CouplingPoint(1.5, 1.0), "B": CouplingPoint(0.2, 0.5)}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=float, default=1.0, help="multiply beta*gap by this factor")
    ap.add_argument("--points", type=int, default=16)
    args = ap.parse_args()

    print(f"{'region':6} {'component':9} {'alpha':>8} {'expected':>8} {'r2':>10}  pass")
    for name, c in POINTS.items():
        d = gap(c).value
        sr = sweep_temperature(c, d / (500 * args.depth), d / (20 * args.depth), args.points)
        for fit in fit_all(sr):
            label, ok = expected_check(fit, c)
            print(f"{name:6} {fit.component:9} {fit.alpha_hat:8.3f} {label:>8} "
                  f"{fit.r_squared:10.6f}  {'yes' if ok else 'NO'}")


if __name__ == "__main__":
    main()
