"""Laplace-transform probe for the transformed problem.

Transforming ``U`` in ``x`` turns the moving-frame equation into the ODE
``dUhat/dt - (lam^2 + sdot lam) Uhat = ghat - alpha`` with ``Uhat(lam, 0) = 0``,
whose solution is

    Uhat(lam, t) = int_0^t exp(lam^2 (t - r) + lam (s(t) - s(r))) (ghat(lam, r) - alpha) dr.

Only ``s`` enters (never ``sdot``), so any continuous front path is accepted.
Every value is computed as ``exp(-lam^2 t) Uhat`` ("scaled") with exponents
shifted by their maximum over the integration range.  If the source is bounded
and ``lam >= 2 ||f|| / alpha`` the bracket is ``<= -alpha/2`` and the scaled
value is strictly negative, which no nonnegative ``U`` can produce.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from .sources import SourceTerm

LAMBDA_MIN = 0.1
QUAD_EPSREL = 1e-12
# absolute tolerance as a fraction of int |integrand|
QUAD_EPSABS_REL = 1e-14


class Certificate(enum.Enum):
    NEGATIVE = "Negative"
    NONNEGATIVE = "NonNegative"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class Trajectory:
    """Front path ``s`` on ``[0, T]``; ``sdot`` is optional and informational."""

    s: Callable[[float], float]
    sdot: Callable[[float], float] | None = None
    name: str = "s"

    @classmethod
    def tabulated(cls, ts, ss, name="tabulated"):
        interp = PchipInterpolator(np.asarray(ts, float), np.asarray(ss, float), extrapolate=True)
        d = interp.derivative()
        return cls(lambda t: float(interp(t)), lambda t: float(d(t)), name)

    @classmethod
    def constant(cls, s0=0.0, name=None):
        return cls(lambda t: s0, lambda t: 0.0, name or f"s={s0:g}")


def preset_trajectories():
    """The four paths used by the nonexistence demonstration."""
    return {
        "zero": Trajectory(lambda t: 0.0, lambda t: 0.0, "zero"),
        "linear": Trajectory(lambda t: t, lambda t: 1.0, "linear"),
        "neg_sqrt": Trajectory(lambda t: -math.sqrt(t), None, "neg_sqrt"),
        "sine": Trajectory(math.sin, math.cos, "sine"),
    }


@dataclass(frozen=True)
class ProbeQuery:
    lam: float
    trajectory: Trajectory
    src: SourceTerm
    alpha: float
    t: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be > 0")
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if not self.t >= 0:
            raise ValueError("t must be >= 0")


@dataclass(frozen=True)
class ProbeResult:
    u_hat: float
    scaled_u_hat: float
    sign_certificate: Certificate
    lambda_threshold: float
    abs_error: float = 0.0
    condition: float = 1.0
    diagnostic: str = ""

    @property
    def u_hat_representable(self):
        return math.isfinite(self.u_hat)


def lambda_threshold(src: SourceTerm, alpha):
    """``2 ||f|| / alpha``; infinite for an unbounded source."""
    return 2.0 * src.sup_norm() / alpha


def g_hat(src: SourceTerm, trajectory: Trajectory, lam, sigma):
    """Transform of ``g(x, sigma) = f(x + s(sigma), sigma)`` over ``x > 0``."""
    if not lam > 0:
        raise ValueError("lambda must be > 0")
    return src.laplace_in_x(lam, sigma, shift=trajectory.s(sigma))


def _probe(q: ProbeQuery, extra: Callable[[float], float] | None) -> ProbeResult:
    lam, a, t, src, traj = q.lam, q.alpha, q.t, q.src, q.trajectory
    thr = lambda_threshold(src, a)
    if t == 0:
        return ProbeResult(0.0, 0.0, Certificate.NONNEGATIVE, thr)
    st = traj.s(t)

    def exponent(r):
        return -lam * lam * r + lam * (st - traj.s(r))

    def bracket(r):
        b = g_hat(src, traj, lam, r) - a
        if extra is not None:
            b += extra(r)
        return b

    singular = src.kind == "invsqrt"
    if singular:
        # r = v^2 absorbs the r^{-1/2} singularity: dr = 2 v dv, 2 v h/(lam v) = 2h/lam
        upper = math.sqrt(t)

        def expo(v):
            return exponent(v * v)

        def body(v):
            r = v * v
            b = 2.0 * src.value / lam - 2.0 * a * v
            if extra is not None:
                b += 2.0 * v * extra(r)
            return b
    else:
        upper = t
        expo = exponent
        body = bracket

    probe_pts = np.linspace(0.0, upper, 257)
    shift = max(expo(v) for v in probe_pts)

    def integrand(v):
        return math.exp(expo(v) - shift) * body(v)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        mass, _ = integrate.quad(lambda v: abs(integrand(v)), 0.0, upper,
                                 epsrel=1e-8, limit=500)
        val, err = integrate.quad(integrand, 0.0, upper, epsabs=QUAD_EPSABS_REL * mass,
                                  epsrel=QUAD_EPSREL, limit=500)
    msgs = [str(w.message).splitlines()[0] for w in caught
            if issubclass(w.category, integrate.IntegrationWarning)]
    diag = "; ".join(msgs)
    # a roundoff report only means the tolerance sits below the cancellation floor
    converged = all("roundoff" in m for m in msgs)
    # digits lost to cancellation between the positive and negative parts
    condition = mass / abs(val) if val != 0 else math.inf
    err = max(err, 4 * np.finfo(float).eps * mass)

    if shift > 700:
        scaled = math.copysign(math.inf, val)
        diag = (diag + "; " if diag else "") + "scaled value overflows"
    else:
        scaled = math.exp(shift) * val
    err_scaled = math.exp(min(shift, 700)) * err
    log_u = lam * lam * t + shift + (math.log(abs(val)) if val != 0 else -math.inf)
    u_hat = math.exp(lam * lam * t + shift) * val if log_u < 709 else math.nan

    tol = max(err_scaled, 1e-14 * abs(scaled))
    if not converged:
        cert = Certificate.INDETERMINATE
    elif scaled < -tol:
        cert = Certificate.NEGATIVE
    elif scaled > tol:
        cert = Certificate.NONNEGATIVE
    else:
        cert = Certificate.INDETERMINATE
    return ProbeResult(u_hat, scaled, cert, thr, err_scaled, condition, diag)


def probe_formula(q: ProbeQuery) -> ProbeResult:
    return _probe(q, None)


def probe_interval(q: ProbeQuery, gap: Callable[[float], float]) -> ProbeResult:
    """Upper bound for the two-front domain ``(s_-(t), s_+(t))``.

    ``q.trajectory`` is the left front ``s_-``.  Extending ``u`` by zero past
    ``s_+`` adds a point sink ``-alpha delta(x - gap)`` in the moving frame,
    whose transform ``-alpha exp(-lam gap)`` joins the bracket.
    """
    a, lam = q.alpha, q.lam

    def extra(r):
        d = gap(r)
        if not d > 0:
            raise ValueError(f"gap must be > 0, got {d} at t={r}")
        return -a * math.exp(-lam * d)

    return _probe(q, extra)


class TransformTruncationError(ValueError):
    def __init__(self, tail_bound, tol):
        super().__init__(f"tail bound {tail_bound:.3e} exceeds tolerance {tol:.3e}; raise x_max")
        self.tail_bound = tail_bound


def tail_bound(sup_abs, lam, x_max):
    """``||U|| exp(-lam x_max) / lam``: what the truncated integral misses at most."""
    return sup_abs * math.exp(-lam * x_max) / lam


def transform_numeric(field, lam, x_max, tol=1e-10, sup_abs=None):
    """``int_0^x_max exp(-lam x) U(x) dx`` for a callable or sampled ``U``.

    ``field`` is either a callable ``U(x)`` (adaptive quadrature) or a pair
    ``(xs, values)`` of samples (composite Simpson).  ``sup_abs`` bounds
    ``|U|`` beyond ``x_max``; by default it is estimated from the data.  Raises
    :class:`TransformTruncationError` if the tail bound exceeds ``tol``.
    """
    if not lam > 0:
        raise ValueError("lambda must be > 0")
    if callable(field):
        if sup_abs is None:
            grid = np.linspace(0.0, x_max, 2001)
            sup_abs = max(abs(float(field(x))) for x in grid)
        bound = tail_bound(sup_abs, lam, x_max)
        if bound > tol:
            raise TransformTruncationError(bound, tol)
        # split so quad resolves the boundary layer near 0 and the long flat tail
        edges = np.unique(np.concatenate(([0.0], np.minimum(x_max, np.array([1, 4, 16]) / lam), [x_max])))
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            v, _ = integrate.quad(lambda x: math.exp(-lam * x) * float(field(x)), a, b,
                                  epsabs=1e-14, epsrel=1e-13, limit=500)
            total += v
        return total
    xs, vals = (np.asarray(v, dtype=float) for v in field)
    keep = xs <= x_max
    xs, vals = xs[keep], vals[keep]
    if sup_abs is None:
        sup_abs = float(np.max(np.abs(vals)))
    bound = tail_bound(sup_abs, lam, xs[-1])
    if bound > tol:
        raise TransformTruncationError(bound, tol)
    return float(integrate.simpson(np.exp(-lam * xs) * vals, x=xs))


@dataclass(frozen=True)
class WitnessRow:
    trajectory_id: str
    lam: float
    t: float
    scaled_u_hat: float
    certificate: Certificate


@dataclass
class WitnessReport:
    lam: float
    threshold: float
    rows: list[WitnessRow] = field(default_factory=list)

    @property
    def all_negative(self):
        return all(r.certificate is Certificate.NEGATIVE for r in self.rows)


class UnboundedSourceError(ValueError):
    pass


def nonexistence_witness(src: SourceTerm, trajectories, alpha, t, lam=None, gap=None):
    """Evaluate the probe for each candidate front path at ``lam >= 2||f||/alpha``.

    ``trajectories`` is a mapping id -> :class:`Trajectory` or a list of them.
    With ``gap`` the two-front bound of :func:`probe_interval` is used.
    """
    if not src.bounded:
        raise UnboundedSourceError(
            "the source is unbounded near t = 0, so no lambda makes the bracket "
            "negative; solutions can exist in this case (e.g. the self-similar one)"
        )
    thr = lambda_threshold(src, alpha)
    if lam is None:
        lam = max(thr, LAMBDA_MIN)
    elif lam < thr:
        raise ValueError(f"lambda={lam} is below the threshold {thr}")
    if not isinstance(trajectories, dict):
        trajectories = {tr.name: tr for tr in trajectories}
    report = WitnessReport(lam, thr)
    for tid, traj in trajectories.items():
        q = ProbeQuery(lam, traj, src, alpha, t)
        res = probe_interval(q, gap) if gap is not None else probe_formula(q)
        report.rows.append(WitnessRow(tid, lam, t, res.scaled_u_hat, res.sign_certificate))
    return report
