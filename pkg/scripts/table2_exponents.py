"""Nonclassical temperature scaling on the three gapless families, with the
scaling-dimension prediction for each component.

    python scripts/table2_exponents.py
"""
import argparse

from qcbxy.scaling import (CriticalCase, expected_check, fit_all, scaling_dimension_report,
                           sweep_temperature)
from qcbxy.xy_model import CouplingPoint

POINTS = [CouplingPoint(1.0, 0.0), CouplingPoint(1.0, 1.0), CouplingPoint(0.5, 0.0)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-min", type=float, default=1e-4)
    ap.add_argument("--t-max", type=float, default=1e-2)
    ap.add_argument("--points", type=int, default=16)
    args = ap.parse_args()

    for c in POINTS:
        case = CriticalCase.of(c)
        sr = sweep_temperature(c, args.t_min, args.t_max, args.points)
        fits = fit_all(sr)
        report = {r["component"]: r for r in scaling_dimension_report(fits, case)}
        print(f"lambda={c.lam:g} gamma={c.gamma:g} ({case.name})")
        for fit in fits:
            label, ok = expected_check(fit, c)
            extra = ""
            if fit.constant is not None:
                extra = f" const={fit.constant:.6g}"
                if fit.subleading_slope is not None:
                    extra += f" subleading T^{fit.subleading_slope:.2f}"
            r = report[fit.component]
            print(f"  {fit.component:6} {fit.model.value:17} alpha={fit.alpha_hat:8.4f} "
                  f"expected={label:17} {'ok' if ok else 'FAIL'} "
                  f"predicted={r['predicted']}{extra}")


if __name__ == "__main__":
    main()
