"""Tabulate sigma(h) and c1(h) over log-spaced h and plot sigma against h."""

import argparse
from pathlib import Path

import numpy as np

from freebound.report import write_csv, write_svg
from freebound.selfsim import build_profile


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--h-min", type=float, default=0.05)
    ap.add_argument("--h-max", type=float, default=5.0)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--out", default="results/sigma_sweep")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    hs = np.geomspace(args.h_min, args.h_max, args.count)
    rows = []
    for h in hs:
        p = build_profile(float(h), args.alpha)
        rows.append((float(h), p.sigma, p.c1))
    sig = [r[1] for r in rows]
    meta = vars(args) | {"strictly_decreasing": bool(np.all(np.diff(sig) < 0))}
    write_csv(out / "sigma_sweep.csv", meta, ["h", "sigma", "c1"], rows)
    write_svg(out / "sigma_sweep.svg", {"sigma(h)": (list(np.log10(hs)), sig)}, "log10 h", "sigma")
    h0 = args.alpha / np.sqrt(np.pi)
    print(f"{len(rows)} points; sigma changes sign at h = alpha/sqrt(pi) = {h0:.6f}")
    print(f"strictly decreasing: {meta['strictly_decreasing']}")


if __name__ == "__main__":
    main()
