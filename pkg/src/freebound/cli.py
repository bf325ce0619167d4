"""Command-line experiment runner.

Subcommands: selfsim, solve, probe, convergence, arrhenius.  Every run writes
CSV files whose ``#`` header echoes the full configuration.  Parameters come
from flags, optionally seeded by ``--config FILE`` (``key=value`` lines,
flags win).

Exit codes: 0 success, 1 usage/config error, 2 FluxInfeasible,
3 NegativityDetected.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import arrhenius, fbsolver, laplace_probe, selfsim
from .report import write_csv, write_svg
from .sources import SourceTerm

EXIT_OK, EXIT_USAGE = 0, 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _source(text):
    try:
        return SourceTerm.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _sweep(text):
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"sweep must be start:stop:count, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("sweep count must be >= 1")
    return a, b, n


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _benchmark(text):
    name, _, arg = text.partition(":")
    try:
        val = float(arg) if arg else 1.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad benchmark {text!r}") from None
    if name in ("tw", "traveling-wave"):
        return ("tw", val)
    if name in ("selfsim", "self-similar"):
        return ("selfsim", val)
    raise argparse.ArgumentTypeError(f"benchmark must be tw:c or selfsim:h, got {text!r}")


def _shared(p, *names):
    add = {
        "alpha": lambda: p.add_argument("--alpha", type=float, default=None, help="flux constant (default 1)"),
        "h": lambda: p.add_argument("--h", type=float, default=None, help="amplitude of h/sqrt(t)"),
        "lambda": lambda: p.add_argument("--lambda", dest="lam", type=float, default=None),
        "L": lambda: p.add_argument("--L", type=float, default=None, help="truncation length"),
        "n": lambda: p.add_argument("--n", type=int, default=None, help="cell count"),
        "dt": lambda: p.add_argument("--dt", type=float, default=None),
        "t0": lambda: p.add_argument("--t0", type=float, default=None),
        "t_end": lambda: p.add_argument("--t-end", dest="t_end", type=float, default=None),
        "source": lambda: p.add_argument("--source", type=_source, default=None,
                                         help="zero | const:c | invsqrt:h"),
        "tol_flux": lambda: p.add_argument("--tol-flux", dest="tol_flux", type=float, default=None),
    }
    for name in names:
        add[name]()
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--config", default=None, help="key=value file; flags override it")


def build_parser():
    parser = _Parser(prog="freebound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("selfsim", help="self-similar solution for f = h/sqrt(t)")
    _shared(p, "alpha", "h")
    p.add_argument("--sweep", type=_sweep, default=None, help="h values start:stop:count")
    p.add_argument("--points", type=int, default=201, help="profile samples")
    p.add_argument("--y-span", dest="y_span", type=float, default=10.0, help="profile extent past sigma")
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("solve", help="front-tracking PDE solve")
    _shared(p, "alpha", "h", "L", "n", "dt", "t0", "t_end", "source", "tol_flux")
    p.add_argument("--preset", choices=sorted(SOLVE_PRESETS), default=None)
    p.add_argument("--u0", choices=["zero", "tw", "selfsim"], default=None)
    p.add_argument("--c", type=float, default=None, help="traveling-wave speed")
    p.add_argument("--snapshot-every", dest="snapshot_every", type=int, default=None)
    p.add_argument("--svg", action="store_true", help="also write fronts.svg")

    p = sub.add_parser("probe", help="Laplace-transform nonexistence probe")
    _shared(p, "alpha", "lambda", "t_end", "source")
    p.add_argument("--preset", choices=["four-trajectories"], default="four-trajectories")
    p.add_argument("--trajectory", action="append", default=None,
                   choices=sorted(laplace_probe.preset_trajectories()))
    p.add_argument("--gap", type=float, default=None, help="constant gap for the interval variant")

    p = sub.add_parser("convergence", help="refinement study against closed forms")
    _shared(p, "alpha", "L", "dt")
    p.add_argument("--benchmark", type=_benchmark, default=("tw", 1.0), help="tw:c or selfsim:h")
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--dx", type=float, default=None)

    p = sub.add_parser("arrhenius", help="regularized problem with an Arrhenius sink")
    _shared(p, "L", "n", "dt", "t_end", "source")
    p.add_argument("--eps", type=_float_list, default=None, help="comma-separated eps values")
    p.add_argument("--u0-level", dest="u0_level", type=float, default=None,
                   help="constant initial value (default 0)")
    return parser


def _load_config(path):
    cfg = {}
    for ln, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{ln}: expected key=value")
        key = key.strip().lstrip("-").replace("-", "_")
        cfg["lam" if key == "lambda" else key] = val.strip()
    return cfg


def parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = _load_config(args.config)
        except OSError as e:
            parser.error(f"cannot read config: {e}")
        except UsageError as e:
            parser.error(str(e))
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = sorted(set(cfg) - known)
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        subparser.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def _meta(args, **extra):
    meta = {k: (v.spec() if isinstance(v, SourceTerm) else v)
            for k, v in vars(args).items() if k not in ("config", "out")}
    meta.update(extra)
    return {k: ("" if v is None else v) for k, v in meta.items()}


def _pick(value, default):
    return default if value is None else value


def _positive(name, v):
    if not (v is not None and math.isfinite(v) and v > 0):
        raise UsageError(f"--{name.replace('_', '-')} must be > 0, got {v}")


def _outdir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# selfsim

def run_selfsim(args):
    alpha = _pick(args.alpha, 1.0)
    if args.h is None:
        raise UsageError("--h is required")
    _positive("alpha", alpha)
    _positive("h", args.h)
    _positive("tol", args.tol)
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    hs = [args.h]
    if args.sweep:
        a, b, n = args.sweep
        _positive("sweep start", a)
        _positive("sweep stop", b)
        hs = list(np.linspace(a, b, n))
    sig_rows = []
    for h in hs:
        p = selfsim.build_profile(float(h), alpha, args.tol)
        sig_rows.append((float(h), alpha, p.sigma, p.c1))
    p = selfsim.build_profile(args.h, alpha, args.tol)
    prof_rows = []
    for y in np.linspace(p.sigma, p.sigma + args.y_span, args.points):
        y = float(y)
        prof_rows.append((y, p.w(y), p.dw(y), selfsim.ode_residual(p, y)))
    out = _outdir(args)
    meta = _meta(args, alpha=alpha)
    write_csv(out / "sigma.csv", meta, ["h", "alpha", "sigma", "c1"], sig_rows)
    write_csv(out / "profile.csv", meta, ["y", "w", "dw", "residual"], prof_rows)
    print(f"sigma(h={args.h:g}, alpha={alpha:g}) = {p.sigma:.17g}")
    return EXIT_OK


# solve

SOLVE_PRESETS = {
    "traveling-wave": dict(u0="tw", source=SourceTerm.zero(), t0=0.0, t_end=1.0, L=20.0, c=1.0),
    "self-similar": dict(u0="selfsim", h=1.0, t0=0.25, t_end=1.0, L=20.0),
    "zero-start": dict(u0="zero", source=SourceTerm.constant(0.5), t0=0.0, t_end=0.1, L=10.0),
}
_SOLVE_DEFAULTS = dict(u0="tw", source=None, t0=0.0, t_end=1.0, L=20.0, n=800, c=1.0,
                       alpha=1.0, h=1.0, tol_flux=1e-9)


@dataclass(frozen=True)
class SolveConfig:
    u0: str
    source: SourceTerm
    alpha: float
    h: float
    c: float
    L: float
    n: int
    dt: float
    t0: float
    t_end: float
    tol_flux: float


def _solve_config(args):
    base = dict(_SOLVE_DEFAULTS)
    if args.preset:
        base.update(SOLVE_PRESETS[args.preset])
    vals = {k: _pick(getattr(args, k, None), base[k]) for k in base}
    if args.dt is None:
        raise UsageError("--dt is required")
    _positive("dt", args.dt)
    for k in ("alpha", "L", "tol_flux", "c", "h"):
        _positive(k, vals[k])
    if vals["n"] < 3:
        raise UsageError("--n must be >= 3")
    if vals["u0"] == "selfsim" and not vals["t0"] > 0:
        raise UsageError("the self-similar start needs --t0 > 0")
    if not args.dt < vals["t_end"] - vals["t0"]:
        raise UsageError("--dt must be smaller than t_end - t0")
    src = vals["source"]
    if src is None:
        src = SourceTerm.inverse_sqrt_time(vals["h"]) if vals["u0"] == "selfsim" else SourceTerm.zero()
    if src.kind == "invsqrt" and not vals["t0"] > 0:
        raise UsageError("an h/sqrt(t) source needs --t0 > 0")
    vals["source"] = src
    return SolveConfig(dt=args.dt, **vals)


def _exact_benchmark(cfg: SolveConfig):
    if cfg.u0 == "tw" and cfg.source.kind == "zero":
        return fbsolver.TravelingWave(cfg.c, cfg.alpha, cfg.t0, cfg.t_end, cfg.L)
    if cfg.u0 == "selfsim" and cfg.source.kind == "invsqrt" and cfg.source.value == cfg.h:
        return fbsolver.SelfSimilar(cfg.h, cfg.alpha, cfg.t0, cfg.t_end, cfg.L)
    return None


def run_solve(args):
    cfg = _solve_config(args)
    grid = fbsolver.Grid1D(cfg.L, cfg.n)
    params = fbsolver.SolverParams(cfg.alpha, grid, tol_flux=cfg.tol_flux)
    x = grid.nodes
    if cfg.u0 == "zero":
        u0, s0, sdot0 = np.zeros_like(x), 0.0, 0.0
    elif cfg.u0 == "tw":
        tw = fbsolver.TravelingWave(cfg.c, cfg.alpha, cfg.t0, cfg.t_end, cfg.L)
        u0, s0, sdot0 = tw.field(x, cfg.t0), 0.0, cfg.c
    else:
        ss = fbsolver.SelfSimilar(cfg.h, cfg.alpha, cfg.t0, cfg.t_end, cfg.L)
        u0, s0, sdot0 = ss.field(x, cfg.t0), ss.front(cfg.t0), ss.sdot(cfg.t0)
    report = fbsolver.solve(fbsolver.FieldSnapshot(cfg.t0, u0), s0, cfg.t_end, cfg.dt,
                            cfg.source, params, sdot0=sdot0, snapshot_every=args.snapshot_every)
    bench = _exact_benchmark(cfg)

    cols = ["t", "s", "sdot", "flux_residual", "min_U", "max_U"]
    if bench is not None:
        cols.append("front_error")
    rows = []
    first = report.snapshots[0].values
    stats = [(fbsolver.discrete_flux(first, grid.dx) - cfg.alpha, first.min(), first.max())]
    stats += [(d.flux_residual, d.min_u, d.max_u) for d in report.diagnostics]
    for f, (r, lo, hi) in zip(report.fronts, stats):
        row = [f.t, f.s, f.sdot, float(r), float(lo), float(hi)]
        if bench is not None:
            row.append(abs(f.s - bench.front(f.t)))
        rows.append(row)
    field_rows = [(snap.t, float(xi), float(ui)) for snap in report.snapshots
                  for xi, ui in zip(x, snap.values)]
    out = _outdir(args)
    meta = _meta(args, **{k: (v.spec() if isinstance(v, SourceTerm) else v)
                          for k, v in vars(cfg).items()})
    meta["status"] = str(report.status)
    write_csv(out / "fronts.csv", meta, cols, rows)
    write_csv(out / "fields.csv", meta, ["t", "x", "U"], field_rows)
    if args.svg:
        series = {"s (numerical)": ([f.t for f in report.fronts], [f.s for f in report.fronts])}
        if bench is not None:
            series["s (exact)"] = ([f.t for f in report.fronts], [bench.front(f.t) for f in report.fronts])
        write_svg(out / "fronts.svg", series, "t", "s(t)")
    print(f"status: {report.status}", file=sys.stderr)
    return report.status.exit_code


# probe

def run_probe(args):
    alpha = _pick(args.alpha, 1.0)
    src = _pick(args.source, SourceTerm.constant(1.0))
    t = _pick(args.t_end, 0.5)
    _positive("alpha", alpha)
    _positive("t_end", t)
    if args.lam is not None:
        _positive("lambda", args.lam)
    if args.gap is not None:
        _positive("gap", args.gap)
    presets = laplace_probe.preset_trajectories()
    names = args.trajectory or list(presets)
    trajs = {k: presets[k] for k in names}
    gap = (lambda r, d=args.gap: d) if args.gap is not None else None
    try:
        rep = laplace_probe.nonexistence_witness(src, trajs, alpha, t, lam=args.lam, gap=gap)
    except laplace_probe.UnboundedSourceError as e:
        raise UsageError(f"refusing to probe: {e}") from None
    except ValueError as e:
        raise UsageError(str(e)) from None
    rows = [(r.trajectory_id, r.lam, r.t, r.scaled_u_hat, r.certificate.value) for r in rep.rows]
    out = _outdir(args)
    write_csv(out / "witness.csv", _meta(args, alpha=alpha, source=src.spec(), t_end=t,
                                         lambda_threshold=rep.threshold, lambda_used=rep.lam),
              ["trajectory_id", "lambda", "t", "scaled_u_hat", "certificate"], rows)
    print(f"lambda threshold 2*||f||/alpha = {rep.threshold:.17g}; using lambda = {rep.lam:.17g}")
    return EXIT_OK


# convergence

def run_convergence(args):
    alpha = _pick(args.alpha, 1.0)
    L = _pick(args.L, 20.0)
    dt = _pick(args.dt, 1e-2)
    dx = _pick(args.dx, 0.05)
    for k, v in (("alpha", alpha), ("L", L), ("dt", dt), ("dx", dx)):
        _positive(k, v)
    kind, val = args.benchmark
    _positive("benchmark parameter", val)
    if kind == "tw":
        bench = fbsolver.TravelingWave(c=val, alpha=alpha, L=L)
    else:
        bench = fbsolver.SelfSimilar(h=val, alpha=alpha, L=L)
    try:
        rows = fbsolver.convergence_study(bench, fbsolver.refinement_ladder(dt, dx, args.levels))
    except fbsolver.BenchmarkFailed as e:
        print(f"status: {e.status}", file=sys.stderr)
        return e.status.exit_code
    except ValueError as e:
        raise UsageError(str(e)) from None
    out = _outdir(args)
    write_csv(out / "convergence.csv",
              _meta(args, alpha=alpha, L=L, dt=dt, dx=dx, benchmark=f"{kind}:{val!r}"),
              ["dt", "dx", "front_error", "field_error", "observed_order"],
              [(r.dt, r.dx, r.front_error, r.field_error, r.observed_order) for r in rows])
    for r in rows:
        print(f"dt={r.dt:.3e} dx={r.dx:.3e} front_error={r.front_error:.3e} order={r.observed_order:.3f}")
    return EXIT_OK


# arrhenius

def run_arrhenius(args):
    eps_list = _pick(args.eps, [0.2, 0.1, 0.05])
    src = _pick(args.source, SourceTerm.constant(5.0))
    L = _pick(args.L, 10.0)
    n = _pick(args.n, 200)
    t_end = _pick(args.t_end, 1.0)
    level = _pick(args.u0_level, 0.0)
    _positive("L", L)
    _positive("t_end", t_end)
    if n < 3:
        raise UsageError("--n must be >= 3")
    if not level >= 0:
        raise UsageError("--u0-level must be >= 0")
    if not src.bounded:
        raise UsageError("the regularized solver needs a bounded source")
    if not eps_list:
        raise UsageError("--eps needs at least one value")
    for e in eps_list:
        _positive("eps", e)
    grid = fbsolver.Grid1D(L, n)
    runs = []
    for eps in eps_list:
        kern = arrhenius.make_kernel(eps)
        dt = args.dt if args.dt is not None else arrhenius.stable_dt(kern)
        try:
            run = arrhenius.solve_regularized(np.full(n + 1, level), src, eps, grid, dt, t_end,
                                              x0=-L / 2)
        except ValueError as e:
            raise UsageError(str(e)) from None
        runs.append((eps, dt, run))
    out = _outdir(args)
    for eps, dt, run in runs:
        rows = zip(run.t, run.min_u, run.mass, run.sink_total,
                   np.concatenate(([0.0], run.balance_residual)))
        write_csv(out / f"arrhenius_eps{eps!r}.csv",
                  _meta(args, eps=eps, dt_used=dt, source=src.spec(), L=L, n=n, t_end=t_end,
                        u0_level=level),
                  ["t", "min_u", "mass", "sink_total", "balance_residual"], rows)
        print(f"eps={eps:g}: min u over t>0 = {run.min_u_after_start:.6g}, "
              f"max balance residual = {run.balance_residual.max():.3e}")
    return EXIT_OK


COMMANDS = {
    "selfsim": run_selfsim,
    "solve": run_solve,
    "probe": run_probe,
    "convergence": run_convergence,
    "arrhenius": run_arrhenius,
}


def main(argv=None):
    args = parse(sys.argv[1:] if argv is None else argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"freebound {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (selfsim.NumericalRangeError, ValueError) as e:
        print(f"freebound {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
