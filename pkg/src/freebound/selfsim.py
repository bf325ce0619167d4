"""Bounded self-similar solution for the source ``f = h / sqrt(t)``.

With ``u(x, t) = sqrt(t) w(x / sqrt(t))`` and ``s(t) = sigma sqrt(t)`` the
problem reduces to ``w/2 - (y/2) w' - w'' = h`` on ``y > sigma`` with
``w(sigma) = 0`` and ``w'(sigma) = alpha``.  The bounded solution is
``w = -c1 W1 + 2h`` and ``sigma`` is the unique root of
``ratio(sigma) = h / alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun

SIGMA_MAX = 100.0


class NumericalRangeError(ArithmeticError):
    """h/alpha is outside what ``ratio`` can represent for |sigma| <= SIGMA_MAX."""


@dataclass(frozen=True)
class SelfSimilarProfile:
    alpha: float
    h: float
    sigma: float
    c1: float
    c0: float = 0.0

    def w(self, y):
        return eval_w(self, y)

    def dw(self, y):
        if y < self.sigma:
            raise ValueError(f"y={y} lies left of the front sigma={self.sigma}")
        return -self.c1 * specfun.dw1(y)

    def ddw(self, y):
        if y < self.sigma:
            raise ValueError(f"y={y} lies left of the front sigma={self.sigma}")
        return -self.c1 * specfun.ddw1(y)

    def u(self, x, t):
        return eval_u(self, x, t)

    def s(self, t):
        return eval_s(self, t)

    def sdot(self, t):
        return self.sigma / (2.0 * math.sqrt(t))

    def moving_frame(self, x, t):
        """``U(x, t) = u(x + s(t), t)`` for ``x >= 0``."""
        if x < 0:
            raise ValueError("moving-frame coordinate must be >= 0")
        rt = math.sqrt(t)
        return rt * (-self.c1 * specfun.w1(self.sigma + x / rt) + 2.0 * self.h)


def _check_positive(**kw):
    for k, v in kw.items():
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise ValueError(f"{k} must be a finite positive number, got {v!r}")


def solve_sigma(h, alpha, tol=1e-12):
    """Front slope ``sigma`` with ``|ratio(sigma) - h/alpha| <= tol``.

    Brackets by doubling out from [-1, 1], then runs Newton steps on the
    analytic derivative, falling back to bisection whenever a step leaves the
    bracket.
    """
    _check_positive(h=h, alpha=alpha, tol=tol)
    target = h / alpha

    def resid(y):
        return specfun.ratio(y) - target

    # ratio is decreasing: resid(lo) > 0 > resid(hi)
    half = 1.0
    while True:
        lo, hi = -half, half
        if resid(lo) >= 0 >= resid(hi):
            break
        if half >= SIGMA_MAX:
            raise NumericalRangeError(
                f"h/alpha={target!r} has no root with |sigma| <= {SIGMA_MAX}"
            )
        half = min(2.0 * half, SIGMA_MAX)

    x = 0.5 * (lo + hi)
    for _ in range(200):
        r = resid(x)
        if abs(r) <= tol:
            return _polish(x, r, resid)
        if r > 0:
            lo = x
        else:
            hi = x
        dr = specfun.ratio_derivative(x)
        step = x - r / dr if dr != 0 else math.nan
        x = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= 4 * math.ulp(abs(x) + 1.0):
            break
    if abs(resid(x)) <= tol:
        return x
    raise ArithmeticError(f"sigma solve stalled at {x!r}, residual {resid(x)!r}")


def _polish(x, r, resid):
    # one extra Newton step once inside tolerance; kept only if it helps
    dr = specfun.ratio_derivative(x)
    if dr == 0:
        return x
    x2 = x - r / dr
    return x2 if abs(resid(x2)) <= abs(r) else x


def build_profile(h, alpha, tol=1e-12) -> SelfSimilarProfile:
    sigma = solve_sigma(h, alpha, tol)
    w1s = specfun.w1(sigma)
    if w1s == 0.0:
        # sigma is well defined but W1 underflows there (sigma above ~53)
        raise NumericalRangeError(f"W1({sigma:.6g}) underflows; c1 is not representable")
    c1 = 2.0 * h / w1s
    return SelfSimilarProfile(alpha=float(alpha), h=float(h), sigma=sigma, c1=c1)


def eval_w(p: SelfSimilarProfile, y):
    if y < p.sigma:
        raise ValueError(f"y={y} lies left of the front sigma={p.sigma}")
    return -p.c1 * specfun.w1(y) + 2.0 * p.h


def eval_s(p: SelfSimilarProfile, t):
    if t < 0:
        raise ValueError("t must be >= 0")
    return p.sigma * math.sqrt(t)


def eval_u(p: SelfSimilarProfile, x, t):
    if not t > 0:
        raise ValueError("t must be > 0")
    s = eval_s(p, t)
    if x < s:
        raise ValueError(f"x={x} lies left of the front s(t)={s}")
    rt = math.sqrt(t)
    # clamp: x == s(t) can map to y a rounding error below sigma
    return rt * eval_w(p, max(x / rt, p.sigma))


def ode_residual(p: SelfSimilarProfile, y):
    """``w/2 - (y/2) w' - w'' - h`` from the analytic derivatives."""
    return 0.5 * p.w(y) - 0.5 * y * p.dw(y) - p.ddw(y) - p.h
