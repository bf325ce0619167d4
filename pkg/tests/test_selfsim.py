import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from freebound import specfun
from freebound.selfsim import (
    SIGMA_MAX,
    NumericalRangeError,
    build_profile,
    eval_s,
    ode_residual,
    solve_sigma,
)

# sigma(h) at alpha = 1 by bisection on the mpmath quadrature ratio
SIGMA_REF = {
    0.1: 9.6073083687034371108,
    0.3: 2.2613920442758048497,
    1.0: -1.6863111126345595850,
    2.0: -3.9894204981659330939,
}


@pytest.mark.parametrize("h", sorted(SIGMA_REF))
def test_sigma_against_quadrature_root(h):
    assert solve_sigma(h, 1.0) == pytest.approx(SIGMA_REF[h], abs=1e-10)


def test_sigma_oracle_values_frozen():
    # the frozen table above is what the oracle produces
    assert float(oracles.sigma(0.3)) == pytest.approx(SIGMA_REF[0.3], abs=1e-15)


def test_sigma_zero_at_calibration():
    assert abs(solve_sigma(1 / math.sqrt(math.pi), 1.0)) <= 1e-10


def test_sigma_signs():
    assert solve_sigma(0.1, 1.0) > 0
    assert solve_sigma(2.0, 1.0) < 0


def test_profile_at_zero_front():
    p = build_profile(1 / math.sqrt(math.pi), 1.0)
    assert p.c1 == pytest.approx(2 / math.sqrt(math.pi), rel=1e-10)
    assert p.c0 == 0


@pytest.mark.parametrize("h,alpha", [(1.0, 1.0), (0.3, 1.0), (2.0, 0.5), (0.05, 1.5)])
def test_free_boundary_conditions(h, alpha):
    p = build_profile(h, alpha)
    assert abs(p.w(p.sigma)) <= 1e-10 * (1 + 2 * h)
    assert p.dw(p.sigma) == pytest.approx(alpha, rel=1e-10)


def test_sqrt_scaling_of_front():
    p = build_profile(1.0, 1.0)
    assert eval_s(p, 4.0) / eval_s(p, 1.0) == pytest.approx(2.0, rel=1e-15)


def test_parabolic_scaling():
    p = build_profile(1.0, 1.0)
    x, t, lam = 1.0, 0.5, 3.0
    assert p.u(x, t) == pytest.approx(p.u(lam * x, lam * lam * t) / lam, abs=1e-12)


@pytest.mark.parametrize("h", [0.1, 1.0, 2.0])
def test_bounded_and_nondecreasing(h):
    p = build_profile(h, 1.0)
    ys = np.linspace(p.sigma, p.sigma + 100, 2001)
    ws = np.array([p.w(y) for y in ys])
    assert ws.max() <= 2 * h + 1e-9
    assert np.all(np.diff(ws) >= -1e-14)


# h/alpha in [0.02, 40] keeps sigma inside (-100, 53), where W1(sigma) is representable
@given(st.floats(0.1, 8), st.floats(0.2, 5))
def test_ode_residual(h, alpha):
    p = build_profile(h, alpha)
    for y in np.linspace(p.sigma, p.sigma + 20, 9):
        assert abs(ode_residual(p, y)) <= 1e-10 * max(1, h)


@given(st.floats(0.1, 8), st.floats(0.2, 5))
def test_ratio_root(h, alpha):
    sigma = solve_sigma(h, alpha)
    assert abs(specfun.ratio(sigma) - h / alpha) <= 1e-12


@given(st.floats(0.02, 10), st.floats(1.001, 2.0))
def test_sigma_decreasing_in_h(h, factor):
    assert solve_sigma(h, 1.0) > solve_sigma(h * factor, 1.0)


def test_sigma_slope_negative():
    for h in np.geomspace(0.05, 5, 10):
        d = 1e-6 * h
        assert (solve_sigma(h + d, 1.0) - solve_sigma(h - d, 1.0)) / (2 * d) < 0


def test_pde_residual_sample():
    p = build_profile(1.0, 1.0)
    d = 1e-4
    for t in (0.3, 1.0, 2.0):
        s = p.s(t)
        for x in (s + 0.01, s + 1.0, s + 5.0):
            ut = (p.u(x, t + d) - p.u(x, t - d)) / (2 * d)
            uxx = (p.u(x + d, t) - 2 * p.u(x, t) + p.u(x - d, t)) / d**2
            assert abs(ut - uxx - 1.0 / math.sqrt(t)) <= 1e-6


@pytest.mark.parametrize("h,alpha", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (math.nan, 1.0), (1.0, math.inf)])
def test_invalid_parameters(h, alpha):
    with pytest.raises(ValueError):
        solve_sigma(h, alpha)


def test_nonpositive_tolerance():
    with pytest.raises(ValueError):
        solve_sigma(1.0, 1.0, tol=0.0)


def test_out_of_range():
    # ratio(SIGMA_MAX) ~ 1/SIGMA_MAX; anything much smaller has no root in range
    with pytest.raises(NumericalRangeError):
        solve_sigma(1e-4 / SIGMA_MAX, 1.0)
    with pytest.raises(NumericalRangeError):
        solve_sigma(1e4 * SIGMA_MAX, 1.0)


def test_underflowing_profile():
    # sigma ~ 66 exists but W1(sigma) ~ exp(-1100) is not a double
    assert solve_sigma(0.015, 1.0) > 60
    with pytest.raises(NumericalRangeError):
        build_profile(0.015, 1.0)


def test_domain_guard():
    p = build_profile(1.0, 1.0)
    with pytest.raises(ValueError):
        p.w(p.sigma - 0.1)
    with pytest.raises(ValueError):
        p.u(p.s(1.0) - 0.1, 1.0)
    with pytest.raises(ValueError):
        p.u(0.0, 0.0)
    assert p.u(p.s(1.0), 1.0) == pytest.approx(0.0, abs=1e-12)


def test_moving_frame_matches_lab_frame():
    p = build_profile(0.7, 1.3)
    t = 0.8
    for x in (0.0, 0.3, 4.0):
        assert p.moving_frame(x, t) == pytest.approx(p.u(x + p.s(t), t), abs=1e-13)
