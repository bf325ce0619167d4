"""High-precision quadrature oracles, independent of the erfc/continued-fraction path."""

import mpmath

mpmath.mp.dps = 50


def tail(y):
    """``int_y^inf exp(-z^2/4) dz`` as ``exp(-y^2/4) int_0^U exp(-(y u/2 + u^2/4)) du``.

    U is chosen so the dropped tail is below exp(-140) relative.
    """
    y = mpmath.mpf(y)
    if y > 0:
        umax = min(280 / y, 2 * mpmath.sqrt(140))
    else:
        umax = -y + 2 * mpmath.sqrt(140)
    scale = min(umax, 2 / max(abs(y), 1))
    pts = [mpmath.mpf(0)]
    while pts[-1] < umax:
        pts.append(min(umax, max(scale, 2 * pts[-1])))
    body = mpmath.quad(lambda u: mpmath.exp(-(y * u / 2 + u * u / 4)), pts)
    return mpmath.exp(-y * y / 4) * body


def w1_defining(y):
    """``y int_y^inf exp(-z^2/4) z^-2 dz``, valid for y > 0 only."""
    assert y > 0
    y = mpmath.mpf(y)
    umax = min(280 / y, 2 * mpmath.sqrt(140))
    pts = [mpmath.mpf(0), umax / 64, umax / 16, umax / 4, umax]
    body = mpmath.quad(lambda u: mpmath.exp(-(y * u / 2 + u * u / 4)) / (y + u) ** 2, pts)
    return y * mpmath.exp(-y * y / 4) * body


def w1_analytic(y):
    y = mpmath.mpf(y)
    return mpmath.exp(-y * y / 4) - y / 2 * tail(y)


def ratio(y):
    y = mpmath.mpf(y)
    return w1_analytic(y) / tail(y)


def sigma(h, alpha=1.0):
    """Root of ratio(sigma) = h/alpha by bisection on the quadrature ratio."""
    target = mpmath.mpf(h) / alpha
    lo, hi = mpmath.mpf(-60), mpmath.mpf(60)
    for _ in range(80):
        mid = (lo + hi) / 2
        if ratio(mid) > target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
