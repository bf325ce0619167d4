"""Arrhenius-type regularization ``u_t - u_xx = f - beta_eps(u)``.

``beta`` is the symmetric smooth bump ``C exp(-1/(s(1-s)))`` on ``(0, 1)``,
normalized so that its integral is 1/2, and ``beta_eps(s) = beta(s/eps)/eps``.
The solver is exploratory: it reports what happens, it does not prove anything.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.linalg import solve_banded

from .fbsolver import Grid1D
from .sources import SourceTerm


def _bump(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s > 0) & (s < 1)
    si = s[inside]
    # 1/q overflows to inf for subnormal s; exp(-inf) = 0 is the right limit
    with np.errstate(over="ignore"):
        out[inside] = np.exp(-1.0 / (si * (1.0 - si)))
    return out


def _bump_slope(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s > 0) & (s < 1)
    si = s[inside]
    q = si * (1.0 - si)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        val = np.exp(-1.0 / q) * (1.0 - 2.0 * si) / q**2
    out[inside] = np.where(np.isfinite(val), val, 0.0)
    return out


@functools.lru_cache(maxsize=None)
def _bump_integral():
    val, _ = integrate.quad(lambda s: math.exp(-1.0 / (s * (1.0 - s))), 0.0, 1.0,
                            epsabs=1e-16, epsrel=1e-14, limit=200)
    return val


@functools.lru_cache(maxsize=None)
def _max_bump_slope():
    # |beta'| peaks inside (0, 1/2); locate it on a fine grid and refine
    s = np.linspace(1e-3, 0.5, 20001)
    i = int(np.argmax(np.abs(_bump_slope(s))))
    lo, hi = s[max(i - 1, 0)], s[min(i + 1, s.size - 1)]
    ss = np.linspace(lo, hi, 2001)
    return float(np.max(np.abs(_bump_slope(ss))))


@dataclass(frozen=True)
class ArrheniusKernel:
    eps: float
    normalizer: float

    def base(self, s):
        """``beta(s)``, supported on (0, 1)."""
        return self.normalizer * _bump(s)

    def __call__(self, u):
        """``beta_eps(u) = beta(u/eps)/eps``."""
        return self.base(np.asarray(u, dtype=float) / self.eps) / self.eps

    def derivative(self, u):
        return self.normalizer * _bump_slope(np.asarray(u, dtype=float) / self.eps) / self.eps**2

    @property
    def max_slope(self):
        """``max |beta_eps'|``."""
        return self.normalizer * _max_bump_slope() / self.eps**2

    def integral(self):
        val, _ = integrate.quad(lambda s: float(self(s)), 0.0, self.eps,
                                epsabs=1e-14, epsrel=1e-13, limit=200)
        return val


def make_kernel(eps) -> ArrheniusKernel:
    if not (isinstance(eps, (int, float)) and math.isfinite(eps) and eps > 0):
        raise ValueError(f"eps must be > 0, got {eps!r}")
    return ArrheniusKernel(float(eps), 0.5 / _bump_integral())


@dataclass
class RegularizedRun:
    eps: float
    x: np.ndarray
    t: np.ndarray
    min_u: np.ndarray
    mass: np.ndarray
    sink_total: np.ndarray
    balance_residual: np.ndarray
    u_final: np.ndarray
    snapshots: list = field(default_factory=list)

    @property
    def min_u_after_start(self):
        return float(np.min(self.min_u[1:]))


def _trapezoid_weights(grid):
    w = np.full(grid.n + 1, grid.dx)
    w[0] = w[-1] = grid.dx / 2
    return w


def _neumann_banded(grid, dt):
    n1 = grid.n + 1
    d2 = dt / grid.dx**2
    ab = np.zeros((3, n1))
    ab[1, :] = 1 + 2 * d2
    ab[0, 1:] = -d2
    ab[2, :-1] = -d2
    # reflecting ends: U_{-1} = U_1, U_{n+1} = U_{n-1}
    ab[0, 1] = -2 * d2
    ab[2, -2] = -2 * d2
    return ab


def stable_dt(kernel: ArrheniusKernel, safety=0.5):
    return safety / kernel.max_slope


def solve_regularized(u0, src: SourceTerm, eps, grid: Grid1D, dt, t_end, x0=0.0,
                      sink=True, snapshot_every=0) -> RegularizedRun:
    """IMEX run on ``[x0, x0 + L]`` with zero-flux ends.

    Diffusion is implicit, the sink explicit and clipped at ``u/dt`` so one
    step cannot remove more than is there.  ``sink=False`` switches the
    reaction off (plain heat equation with source).
    """
    u = np.array(u0, dtype=float)
    if u.shape != (grid.n + 1,):
        raise ValueError("u0 does not match the grid")
    if np.any(u < 0):
        raise ValueError("u0 must be >= 0")
    if not src.bounded:
        raise ValueError("the regularized solver needs a bounded source")
    if not (dt > 0 and t_end > 0):
        raise ValueError("dt and t_end must be > 0")
    kernel = make_kernel(eps)
    if sink and dt * kernel.max_slope > 1.0:
        raise ValueError(
            f"dt={dt:g} too large for the explicit sink (dt * max|beta_eps'| = "
            f"{dt * kernel.max_slope:.3g} > 1); try dt <= {stable_dt(kernel):.3g}"
        )
    nsteps = max(1, int(math.ceil(t_end / dt - 1e-9)))
    dt = t_end / nsteps
    x = x0 + grid.nodes
    w = _trapezoid_weights(grid)
    ab = _neumann_banded(grid, dt)

    ts = np.linspace(0.0, t_end, nsteps + 1)
    min_u = np.empty(nsteps + 1)
    mass = np.empty(nsteps + 1)
    sink_total = np.zeros(nsteps + 1)
    resid = np.zeros(nsteps)
    min_u[0] = u.min()
    mass[0] = w @ u
    snaps = [(0.0, u.copy())] if snapshot_every else []
    for k in range(nsteps):
        f = src(x, ts[k + 1])
        q = np.minimum(kernel(u), u / dt) if sink else np.zeros_like(u)
        u_new = solve_banded((1, 1), ab, u + dt * (f - q))
        # boundary flux is zero for reflecting ends; the sums below are independent
        source_in = float(np.sum(w * f))
        sink_out = float(np.sum(w * q))
        m_new = float(np.sum(w * u_new))
        resid[k] = abs((m_new - mass[k]) / dt - source_in + sink_out - 0.0)
        u = u_new
        mass[k + 1] = m_new
        min_u[k + 1] = u.min()
        sink_total[k + 1] = sink_total[k] + dt * sink_out
        if snapshot_every and (k + 1) % snapshot_every == 0:
            snaps.append((ts[k + 1], u.copy()))
    return RegularizedRun(float(eps), x, ts, min_u, mass, sink_total, resid, u, snaps)
