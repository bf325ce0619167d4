"""Regularized runs from u0 = 0: does a dead zone (u = 0 region) form?

This is an observation, not a proof: it records min u over time for a
decreasing sequence of eps.
"""

import argparse
from pathlib import Path

import numpy as np

from freebound.arrhenius import make_kernel, solve_regularized, stable_dt
from freebound.fbsolver import Grid1D
from freebound.report import write_csv, write_svg
from freebound.sources import SourceTerm


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--source", default="const:5")
    ap.add_argument("--eps", default="0.2,0.1,0.05")
    ap.add_argument("--L", type=float, default=10.0)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--t-end", type=float, default=1.0)
    ap.add_argument("--out", default="results/arrhenius")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    src = SourceTerm.parse(args.source)
    grid = Grid1D(args.L, args.n)
    series = {}
    for eps in (float(e) for e in args.eps.split(",")):
        run = solve_regularized(np.zeros(args.n + 1), src, eps, grid,
                                stable_dt(make_kernel(eps)), args.t_end, x0=-args.L / 2)
        write_csv(out / f"eps{eps!r}.csv", vars(args) | {"eps": eps},
                  ["t", "min_u", "mass", "sink_total"],
                  zip(run.t, run.min_u, run.mass, run.sink_total))
        series[f"eps={eps:g}"] = (list(run.t), list(run.min_u))
        print(f"eps={eps:g}: min u for t > 0 = {run.min_u_after_start:.4g}, "
              f"burnt mass = {run.sink_total[-1]:.4g}, "
              f"max balance residual = {run.balance_residual.max():.1e}")
    write_svg(out / "min_u.svg", series, "t", "min u")


if __name__ == "__main__":
    main()
