"""Fundamental system of the Hermite-type equation ``w/2 - (y/2) w' - w'' = 0``.

The two solutions are ``W0(y) = y`` and the bounded, decaying, convex

    W1(y) = exp(-y^2/4) - (y/2) * T(y),   T(y) = int_y^inf exp(-z^2/4) dz,

with ``W1' = -T/2`` and ``W1'' = exp(-y^2/4)/2``.  ``T(y) = sqrt(pi) erfc(y/2)``.

Everything is built on a scaled complementary error function written here:
a positive power series below ``|z| = 1`` and a continued fraction above.
The continued fraction

    sqrt(pi) erfcx(z) = 1 / (z + K(z)),   K(z) = (1/2)/(z + 1/(z + (3/2)/(z + ...)))

also gives the ratio ``W1/T`` in closed form (it is exactly ``K(y/2)``), which
keeps the ratio finite where ``W1`` and ``T`` both underflow.
"""

import math

SQRT_PI = math.sqrt(math.pi)

_SERIES_CUTOFF = 1.0
_CF_MAXTERMS = 600


def _check(y):
    y = float(y)
    if not math.isfinite(y):
        raise ValueError(f"argument must be finite, got {y!r}")
    return y


def _exp_neg_sq(a):
    """``exp(-a*a)`` without the relative error a^2 * eps from rounding a*a."""
    hi = math.floor(a * 2.0**20) / 2.0**20
    lo = a - hi
    return math.exp(-hi * hi) * math.exp(-lo * (a + hi))


def _erf_series(z):
    # erf(z) = 2/sqrt(pi) exp(-z^2) sum_n (2 z^2)^n z / (2n+1)!!, all terms positive
    z2 = z * z
    term = z
    total = z
    n = 0
    while True:
        n += 1
        term *= 2.0 * z2 / (2 * n + 1)
        total += term
        if term <= 1e-17 * total:
            break
    return 2.0 / SQRT_PI * _exp_neg_sq(z) * total


def _cf_terms(z):
    # enough terms for full double precision; found by comparing N against 2N
    return int(min(_CF_MAXTERMS, 30 + 260 / (z * z)))


def _cf_tail(z):
    """K(z) for z >= _SERIES_CUTOFF, evaluated bottom-up.

    The backward recurrence ``t <- (k/2) / (z + t)`` is contractive, so its
    rounding error stays near one ulp (the forward Lentz product accumulates
    one rounding per term).
    """
    t = 0.0
    for k in range(_cf_terms(z), 0, -1):
        t = 0.5 * k / (z + t)
    return t


def erfc(z):
    """Complementary error function, relative accuracy ~1e-15."""
    z = _check(z)
    if abs(z) < _SERIES_CUTOFF:
        return 1.0 - math.copysign(_erf_series(abs(z)), z)
    a = abs(z)
    val = _exp_neg_sq(a) / (SQRT_PI * (a + _cf_tail(a)))
    return val if z > 0 else 2.0 - val


def erfcx(z):
    """Scaled complementary error function ``exp(z^2) erfc(z)``.

    Overflows to ``inf`` for very negative ``z`` like the unscaled growth it
    represents.
    """
    z = _check(z)
    if z >= _SERIES_CUTOFF:
        return 1.0 / (SQRT_PI * (z + _cf_tail(z)))
    if z > -_SERIES_CUTOFF:
        return math.exp(z * z) * (1.0 - math.copysign(_erf_series(abs(z)), z))
    if z * z > 709.0:
        return math.inf
    return 2.0 * math.exp(z * z) - erfcx(-z)


def tail_integral(y):
    """``int_y^inf exp(-z^2/4) dz``."""
    return SQRT_PI * erfc(_check(y) / 2.0)


def w0(y):
    return _check(y)


def w1(y):
    """Bounded solution, evaluated through its globally analytic form."""
    y = _check(y)
    z = y / 2.0
    if z >= _SERIES_CUTOFF:
        k = _cf_tail(z)
        return _exp_neg_sq(z) * k / (z + k)
    if z <= -_SERIES_CUTOFF:
        # reflection w1(y) - w1(-y) = -y sqrt(pi); linear part rounded once
        return -y * SQRT_PI + w1(-y)
    return _exp_neg_sq(z) - z * tail_integral(y)


def dw1(y):
    return -0.5 * tail_integral(y)


def ddw1(y):
    y = _check(y)
    return 0.5 * _exp_neg_sq(y / 2.0)


def ratio(y):
    """``-W1/(2 W1') = W1/T``; positive and strictly decreasing, ~1/y for large y."""
    y = _check(y)
    z = y / 2.0
    if z >= _SERIES_CUTOFF:
        return _cf_tail(z)
    return w1(y) / tail_integral(y)


def ratio_derivative(y):
    """d/dy of :func:`ratio`, equal to ``-F/(2 W1'^2)``."""
    y = _check(y)
    z = y / 2.0
    if z >= _SERIES_CUTOFF:
        k = _cf_tail(z)
        return -0.5 + k * (z + k)
    return -0.5 + ratio(y) * _exp_neg_sq(z) / tail_integral(y)


def f_wronskian(y):
    """``F = (W1')^2 - W1 W1''``."""
    y = _check(y)
    return dw1(y) ** 2 - w1(y) * ddw1(y)
