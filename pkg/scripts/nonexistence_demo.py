"""Probe values for bounded and unbounded sources, side by side.

For a bounded source the scaled transform is negative for every front path
once lambda passes 2||f||/alpha.  For f = h/sqrt(t) the self-similar solution
exists, and its transform stays positive for all lambda.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from freebound.laplace_probe import ProbeQuery, Trajectory, preset_trajectories, probe_formula
from freebound.report import write_csv
from freebound.selfsim import build_profile
from freebound.sources import SourceTerm


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", type=float, default=1.0, help="constant source level")
    ap.add_argument("--h", type=float, default=1.0, help="h in h/sqrt(t)")
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--t", type=float, default=0.5)
    ap.add_argument("--out", default="results/nonexistence")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lams = np.geomspace(0.1, 20, 40)
    threshold = 2 * args.c / args.alpha
    rows = []
    bounded = SourceTerm.constant(args.c)
    for tid, path in preset_trajectories().items():
        for lam in lams:
            res = probe_formula(ProbeQuery(float(lam), path, bounded, args.alpha, args.t))
            rows.append((f"const/{tid}", float(lam), res.scaled_u_hat, res.sign_certificate.value))

    p = build_profile(args.h, args.alpha)
    ss_path = Trajectory(lambda t: p.sigma * math.sqrt(t), p.sdot, "self-similar")
    singular = SourceTerm.inverse_sqrt_time(args.h)
    for lam in lams:
        res = probe_formula(ProbeQuery(float(lam), ss_path, singular, args.alpha, args.t))
        rows.append(("invsqrt/self-similar", float(lam), res.scaled_u_hat, res.sign_certificate.value))

    write_csv(out / "probe_scan.csv", vars(args) | {"lambda_threshold": threshold},
              ["case", "lambda", "scaled_u_hat", "certificate"], rows)
    for case in sorted({r[0] for r in rows}):
        past = [r for r in rows if r[0] == case and r[1] >= threshold]
        signs = sorted({r[3] for r in past})
        print(f"{case:24s} lambda >= {threshold:g}: {', '.join(signs)}")


if __name__ == "__main__":
    main()
