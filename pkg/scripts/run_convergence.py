"""Refinement study on both closed-form benchmarks (dt halved, dx by sqrt 2)."""

import argparse
from pathlib import Path

from freebound.fbsolver import SelfSimilar, TravelingWave, convergence_study, refinement_ladder
from freebound.report import write_csv, write_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--dx", type=float, default=0.025)
    ap.add_argument("--levels", type=int, default=4)
    ap.add_argument("--out", default="results/convergence")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ladder = refinement_ladder(args.dt, args.dx, args.levels)
    series = {}
    for name, bench in (("traveling_wave", TravelingWave()), ("self_similar", SelfSimilar())):
        rows = convergence_study(bench, ladder)
        write_csv(out / f"{name}.csv", vars(args) | {"benchmark": name},
                  ["dt", "dx", "front_error", "field_error", "observed_order"],
                  [(r.dt, r.dx, r.front_error, r.field_error, r.observed_order) for r in rows])
        series[name] = ([r.dt for r in rows], [r.front_error for r in rows])
        print(name)
        for r in rows:
            print(f"  dt={r.dt:.2e} dx={r.dx:.4f} front={r.front_error:.3e} "
                  f"field={r.field_error:.3e} order={r.observed_order:.3f}")
    write_svg(out / "front_error.svg", series, "dt", "max front error")


if __name__ == "__main__":
    main()
