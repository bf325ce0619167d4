"""Front-tracking solver for the one-phase problem in the frame of the front.

With ``U(x, t) = u(x + s(t), t)`` on ``x > 0``::

    dU/dt = U_xx + sdot U_x + f(x + s(t), t),   U(0, t) = 0,   U_x(0, t) = alpha.

Each step is implicit Euler with central differences (upwinded advection when
the cell Peclet number ``|sdot| dx / 2`` exceeds one) and a homogeneous
Neumann condition at the truncation point ``x = L``.  The front velocity is the
scalar unknown that makes the one-sided discrete flux at ``x = 0`` equal
``alpha``; it is found by a safeguarded secant iteration.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .selfsim import build_profile
from .sources import SourceTerm


@dataclass(frozen=True)
class Grid1D:
    L: float
    n: int

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("L must be > 0")
        if int(self.n) != self.n or self.n < 3:
            raise ValueError("n must be an integer >= 3")

    @classmethod
    def from_spacing(cls, L, dx):
        return cls(L, max(3, int(round(L / dx))))

    @property
    def dx(self):
        return self.L / self.n

    @property
    def nodes(self):
        return np.linspace(0.0, self.L, self.n + 1)


@dataclass(frozen=True)
class FieldSnapshot:
    t: float
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class FrontState:
    t: float
    s: float
    sdot: float


class StatusKind(enum.Enum):
    COMPLETED = "Completed"
    FLUX_INFEASIBLE = "FluxInfeasible"
    NEGATIVITY_DETECTED = "NegativityDetected"


EXIT_CODES = {
    StatusKind.COMPLETED: 0,
    StatusKind.FLUX_INFEASIBLE: 2,
    StatusKind.NEGATIVITY_DETECTED: 3,
}


@dataclass(frozen=True)
class Status:
    kind: StatusKind
    t: float | None = None
    x: float | None = None

    @property
    def exit_code(self):
        return EXIT_CODES[self.kind]

    def __str__(self):
        if self.kind is StatusKind.COMPLETED:
            return self.kind.value
        if self.kind is StatusKind.FLUX_INFEASIBLE:
            return f"{self.kind.value}(t={self.t!r})"
        return f"{self.kind.value}(t={self.t!r}, x={self.x!r})"


class FluxInfeasible(RuntimeError):
    def __init__(self, t, msg=""):
        super().__init__(f"no front velocity reaches the flux condition at t={t}. {msg}")
        self.t = t


class NegativityDetected(RuntimeError):
    def __init__(self, t, x, value):
        super().__init__(f"U={value:.3e} < 0 at x={x}, t={t}")
        self.t = t
        self.x = x
        self.value = value


@dataclass(frozen=True)
class SolverParams:
    alpha: float
    grid: Grid1D
    tol_flux: float = 1e-9
    max_iter: int = 50
    tol_neg: float = 1e-8
    v_max: float = 1e4

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if not (self.tol_flux > 0 and self.tol_neg > 0 and self.v_max > 0):
            raise ValueError("tolerances and v_max must be > 0")


@dataclass(frozen=True)
class StepDiagnostics:
    t: float
    iterations: int
    flux_residual: float
    min_u: float
    max_u: float


@dataclass
class SolveReport:
    snapshots: list[FieldSnapshot]
    fronts: list[FrontState]
    status: Status
    diagnostics: list[StepDiagnostics] = field(default_factory=list)

    @property
    def completed(self):
        return self.status.kind is StatusKind.COMPLETED


def _assemble(n, dx, dt, sdot):
    """Banded matrix for unknowns U_1..U_n (U_0 = 0 eliminated)."""
    m = n
    ab = np.zeros((3, m))
    d2 = dt / dx**2
    if abs(sdot) * dx / 2.0 <= 1.0:
        lower = -d2 + dt * sdot / (2 * dx)
        upper = -d2 - dt * sdot / (2 * dx)
        diag = 1 + 2 * d2
    elif sdot > 0:
        lower = -d2
        upper = -d2 - dt * sdot / dx
        diag = 1 + 2 * d2 + dt * sdot / dx
    else:
        lower = -d2 + dt * sdot / dx
        upper = -d2
        diag = 1 + 2 * d2 - dt * sdot / dx
    ab[1, :] = diag
    ab[0, 1:] = upper
    ab[2, :-1] = lower
    # Neumann row at x = L via ghost node U_{n+1} = U_{n-1}; advection vanishes there
    ab[1, -1] = 1 + 2 * d2
    ab[2, -2] = -2 * d2
    return ab


def discrete_flux(values, dx):
    return (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dx)


def step(snapshot: FieldSnapshot, front: FrontState, dt, src: SourceTerm, params: SolverParams):
    """Advance one implicit-Euler step; returns ``(snapshot, front, diagnostics)``.

    Raises :class:`FluxInfeasible` when no admissible front velocity meets the
    flux condition and :class:`NegativityDetected` when the new field dips
    below ``-tol_neg``.
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    grid = params.grid
    n, dx = grid.n, grid.dx
    x = grid.nodes
    t_new = snapshot.t + dt
    old = snapshot.values[1:]
    depends_on_x = src.kind == "tabulated"
    if not depends_on_x:
        g_fixed = src.step_average(x[1:], snapshot.t, dt)

    def field_for(sdot):
        if depends_on_x:
            g = src.step_average(x[1:] + front.s + dt * sdot, snapshot.t, dt)
        else:
            g = g_fixed
        u = solve_banded((1, 1), _assemble(n, dx, dt, sdot), old + dt * g)
        return np.concatenate(([0.0], u))

    def resid(sdot):
        u = field_for(sdot)
        return discrete_flux(u, dx) - params.alpha, u

    sdot, values, r, iters = _front_velocity(resid, front.sdot, params, t_new)
    bad = np.flatnonzero(values < -params.tol_neg)
    if bad.size:
        i = int(bad[np.argmin(values[bad])])
        raise NegativityDetected(t_new, float(x[i]), float(values[i]))
    new_front = FrontState(t_new, front.s + dt * sdot, sdot)
    diag = StepDiagnostics(t_new, iters, float(r), float(values.min()), float(values.max()))
    return FieldSnapshot(t_new, values), new_front, diag


def _front_velocity(resid, guess, params, t):
    # the discrete flux increases with sdot: keep a bracket lo (r<0), hi (r>0)
    tol, vmax = params.tol_flux, params.v_max
    lo, hi = -vmax, vmax
    have_lo = have_hi = False
    x0 = float(np.clip(guess, -vmax, vmax))
    r0, u0 = resid(x0)
    it = 1
    if abs(r0) <= tol:
        return x0, u0, r0, it
    delta = 1e-3 * max(1.0, abs(x0))
    x1 = x0 + (delta if r0 < 0 else -delta)
    while it < params.max_iter:
        x1 = float(np.clip(x1, -vmax, vmax))
        r1, u1 = resid(x1)
        it += 1
        if not math.isfinite(r1):
            raise FluxInfeasible(t, "non-finite flux residual")
        if abs(r1) <= tol:
            return x1, u1, r1, it
        for xv, rv in ((x0, r0), (x1, r1)):
            if rv < 0 and (not have_lo or xv > lo):
                lo, have_lo = xv, True
            if rv > 0 and (not have_hi or xv < hi):
                hi, have_hi = xv, True
        if abs(x1) >= vmax and ((x1 > 0 and r1 < 0) or (x1 < 0 and r1 > 0)):
            raise FluxInfeasible(t, f"flux residual {r1:.3e} at the velocity cap {x1:g}")
        xn = x1 - r1 * (x1 - x0) / (r1 - r0) if r1 != r0 else math.nan
        if have_lo and have_hi:
            if not (lo < xn < hi):
                xn = 0.5 * (lo + hi)
            if hi - lo <= 1e-15 * max(1.0, abs(hi)):
                raise FluxInfeasible(t, "bracket collapsed without meeting tolerance")
        else:
            # march outward toward the missing side of the bracket
            away = x1 - x0 if x1 != x0 else delta
            direction = 1.0 if r1 < 0 else -1.0
            far = x1 + direction * 2.0 * abs(away)
            if not math.isfinite(xn) or (xn - x1) * direction <= 0 or abs(xn - x1) > abs(far - x1):
                xn = far
        x0, r0 = x1, r1
        x1 = xn
    raise FluxInfeasible(t, f"no convergence in {params.max_iter} iterations")


def solve(u0: FieldSnapshot, s0, t_end, dt, src: SourceTerm, params: SolverParams,
          sdot0=0.0, snapshot_every=None) -> SolveReport:
    """Run :func:`step` from ``u0.t`` to ``t_end``.

    ``dt`` is shrunk slightly so that an integer number of steps lands on
    ``t_end``.  Failures end the run and are recorded in ``status``.
    """
    if not t_end > u0.t:
        raise ValueError("t_end must exceed the initial time")
    if not dt > 0:
        raise ValueError("dt must be > 0")
    if u0.values.shape != (params.grid.n + 1,):
        raise ValueError("initial field does not match the grid")
    if u0.values[0] != 0.0:
        raise ValueError("initial field must satisfy U(0) = 0")
    nsteps = max(1, int(math.ceil((t_end - u0.t) / dt - 1e-9)))
    dt = (t_end - u0.t) / nsteps
    if snapshot_every is None:
        snapshot_every = max(1, nsteps // 10)

    snap = u0
    front = FrontState(u0.t, float(s0), float(sdot0))
    snapshots, fronts, diags = [snap], [front], []
    status = Status(StatusKind.COMPLETED)
    for k in range(1, nsteps + 1):
        try:
            snap, front, d = step(snap, front, dt, src, params)
        except FluxInfeasible as e:
            status = Status(StatusKind.FLUX_INFEASIBLE, t=e.t)
            break
        except NegativityDetected as e:
            status = Status(StatusKind.NEGATIVITY_DETECTED, t=e.t, x=e.x)
            break
        fronts.append(front)
        diags.append(d)
        if k % snapshot_every == 0 or k == nsteps:
            snapshots.append(snap)
    return SolveReport(snapshots, fronts, status, diags)


# benchmarks with closed-form solutions

@dataclass(frozen=True)
class TravelingWave:
    """``U = (alpha/c)(1 - exp(-c x))`` with ``s(t) = s0 + c t`` and ``f = 0``."""

    c: float = 1.0
    alpha: float = 1.0
    t0: float = 0.0
    t_end: float = 1.0
    L: float = 20.0

    source = SourceTerm.zero()

    def field(self, x, t):
        return self.alpha / self.c * (1.0 - np.exp(-self.c * np.asarray(x, dtype=float)))

    def front(self, t):
        return self.c * (t - self.t0)

    def sdot(self, t):
        return self.c


@dataclass(frozen=True)
class SelfSimilar:
    """Exact solution for ``f = h / sqrt(t)`` started at ``t0 > 0``."""

    h: float = 1.0
    alpha: float = 1.0
    t0: float = 0.25
    t_end: float = 1.0
    L: float = 20.0

    @property
    def profile(self):
        return build_profile(self.h, self.alpha)

    @property
    def source(self):
        return SourceTerm.inverse_sqrt_time(self.h)

    def field(self, x, t):
        p = self.profile
        return np.array([p.moving_frame(xi, t) for xi in np.atleast_1d(x)])

    def front(self, t):
        return self.profile.s(t)

    def sdot(self, t):
        return self.profile.sdot(t)


def run_benchmark(bench, dt, dx, params_kw=None, snapshot_every=None):
    grid = Grid1D.from_spacing(bench.L, dx)
    params = SolverParams(alpha=bench.alpha, grid=grid, **(params_kw or {}))
    u0 = FieldSnapshot(bench.t0, bench.field(grid.nodes, bench.t0))
    return solve(u0, bench.front(bench.t0), bench.t_end, dt, bench.source, params,
                 sdot0=bench.sdot(bench.t0), snapshot_every=snapshot_every)


def benchmark_errors(bench, report, grid):
    """Max front error over the run and max field error at the final time."""
    front_err = max(abs(f.s - bench.front(f.t)) for f in report.fronts)
    last = report.snapshots[-1]
    field_err = float(np.max(np.abs(last.values - bench.field(grid.nodes, last.t))))
    return front_err, field_err


@dataclass(frozen=True)
class ConvergenceRow:
    dt: float
    dx: float
    front_error: float
    field_error: float
    observed_order: float


class BenchmarkFailed(RuntimeError):
    def __init__(self, status):
        super().__init__(f"benchmark solve ended with {status}")
        self.status = status


def refinement_ladder(dt0, dx0, levels):
    """Each level halves dt and dx**2."""
    return [(dt0 / 2**k, dx0 / 2 ** (k / 2)) for k in range(levels)]


def convergence_study(bench, refinements) -> list[ConvergenceRow]:
    if len(refinements) < 3:
        raise ValueError("need at least 3 refinement levels to estimate an order")
    rows = []
    prev = None
    for dt, dx in refinements:
        grid = Grid1D.from_spacing(bench.L, dx)
        report = run_benchmark(bench, dt, dx)
        if not report.completed:
            raise BenchmarkFailed(report.status)
        fe, ue = benchmark_errors(bench, report, grid)
        order = math.log2(prev / fe) if prev is not None and fe > 0 else math.nan
        rows.append(ConvergenceRow(dt, grid.dx, fe, ue, order))
        prev = fe
    return rows
