"""External heat source descriptors ``f(x, t)``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

KINDS = ("zero", "constant", "invsqrt", "tabulated")


@dataclass(frozen=True)
class SourceTerm:
    """One of: zero, constant ``c >= 0``, ``h / sqrt(t)`` with ``h > 0``, or tabulated.

    A tabulated source is piecewise linear in ``x`` (constant beyond the end
    knots) and, when ``ts`` is given, linear in ``t`` between rows of ``values``.
    """

    kind: str
    value: float = 0.0
    xs: np.ndarray | None = field(default=None, repr=False)
    ts: np.ndarray | None = field(default=None, repr=False)
    values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown source kind {self.kind!r}")
        if self.kind == "constant" and not self.value >= 0:
            raise ValueError("constant source must be >= 0")
        if self.kind == "invsqrt" and not self.value > 0:
            raise ValueError("h / sqrt(t) source needs h > 0")
        if self.kind == "tabulated":
            xs = np.asarray(self.xs, dtype=float)
            vals = np.asarray(self.values, dtype=float)
            if xs.ndim != 1 or xs.size < 2 or np.any(np.diff(xs) <= 0):
                raise ValueError("tabulated xs must be strictly increasing, length >= 2")
            if self.ts is None:
                if vals.shape != xs.shape:
                    raise ValueError("values must match xs")
            else:
                ts = np.asarray(self.ts, dtype=float)
                if vals.shape != (ts.size, xs.size):
                    raise ValueError("values must have shape (len(ts), len(xs))")
                object.__setattr__(self, "ts", ts)
            if np.any(vals < 0) or not np.all(np.isfinite(vals)):
                raise ValueError("tabulated values must be finite and >= 0")
            object.__setattr__(self, "xs", xs)
            object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def constant(cls, c):
        return cls("constant", float(c))

    @classmethod
    def inverse_sqrt_time(cls, h):
        return cls("invsqrt", float(h))

    @classmethod
    def tabulated(cls, xs, values, ts=None):
        return cls("tabulated", xs=xs, values=values, ts=ts)

    @classmethod
    def parse(cls, text: str) -> "SourceTerm":
        """Parse ``zero``, ``const:c`` or ``invsqrt:h``."""
        name, _, arg = text.partition(":")
        if name == "zero" and not arg:
            return cls.zero()
        try:
            val = float(arg)
        except ValueError:
            raise ValueError(f"bad source spec {text!r}") from None
        if name == "const":
            return cls.constant(val)
        if name == "invsqrt":
            return cls.inverse_sqrt_time(val)
        raise ValueError(f"bad source spec {text!r}")

    def spec(self) -> str:
        if self.kind == "zero":
            return "zero"
        if self.kind == "constant":
            return f"const:{self.value!r}"
        if self.kind == "invsqrt":
            return f"invsqrt:{self.value!r}"
        return "tabulated"

    @property
    def bounded(self) -> bool:
        return self.kind != "invsqrt"

    def sup_norm(self) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "constant":
            return self.value
        if self.kind == "invsqrt":
            return math.inf
        return float(np.max(self.values))

    def _row(self, t):
        if self.ts is None:
            return self.values
        ts = self.ts
        if t <= ts[0]:
            return self.values[0]
        if t >= ts[-1]:
            return self.values[-1]
        j = int(np.searchsorted(ts, t)) - 1
        w = (t - ts[j]) / (ts[j + 1] - ts[j])
        return (1 - w) * self.values[j] + w * self.values[j + 1]

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "constant":
            return np.full_like(x, self.value)
        if self.kind == "invsqrt":
            if t <= 0:
                raise ValueError("h / sqrt(t) source is singular at t <= 0")
            return np.full_like(x, self.value / math.sqrt(t))
        return np.interp(x, self.xs, self._row(t))

    def step_average(self, x, t, dt):
        """Mean of ``f`` over ``[t, t + dt]``; exact for the ``h/sqrt(t)`` kind."""
        if self.kind == "invsqrt":
            avg = 2.0 * self.value * (math.sqrt(t + dt) - math.sqrt(t)) / dt
            return np.full_like(np.asarray(x, dtype=float), avg)
        return self(x, t + dt)

    def laplace_in_x(self, lam, t, shift=0.0):
        """``int_0^inf exp(-lam x) f(x + shift, t) dx``.

        Closed form for every kind; the tabulated kind is integrated exactly
        over its piecewise-linear interpolant.
        """
        if not lam > 0:
            raise ValueError("lambda must be > 0")
        if self.kind == "zero":
            return 0.0
        if self.kind == "constant":
            return self.value / lam
        if self.kind == "invsqrt":
            if t <= 0:
                raise ValueError("h / sqrt(t) source is singular at t <= 0")
            return self.value / (lam * math.sqrt(t))
        return _laplace_piecewise_linear(self.xs - shift, self._row(t), lam)


def _laplace_piecewise_linear(knots, vals, lam):
    # f is vals[0] left of knots[0], linear between knots, vals[-1] right of knots[-1];
    # integrate exp(-lam x) f on (0, inf)
    knots = np.asarray(knots, dtype=float)
    vals = np.asarray(vals, dtype=float)
    fa = np.interp(0.0, knots, vals)
    inner = knots > 0
    xs = np.concatenate(([0.0], knots[inner]))
    fs = np.concatenate(([fa], vals[inner]))
    total = 0.0
    for a, b, ya, yb in zip(xs[:-1], xs[1:], fs[:-1], fs[1:]):
        slope = (yb - ya) / (b - a)
        ea = math.exp(-lam * a)
        eb = math.exp(-lam * b)
        # int_a^b e^{-lam x} (ya + slope (x - a)) dx
        total += ya * (ea - eb) / lam + slope * ((ea - eb) / lam**2 - (b - a) * eb / lam)
    total += fs[-1] * math.exp(-lam * xs[-1]) / lam
    return total
