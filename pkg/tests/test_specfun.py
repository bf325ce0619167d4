import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from freebound import specfun as sf

SQRT_PI = math.sqrt(math.pi)
finite_y = st.floats(-40, 40, allow_nan=False)


def test_values_at_origin():
    assert sf.w1(0) == pytest.approx(1.0, abs=1e-12)
    assert sf.dw1(0) == pytest.approx(-SQRT_PI / 2, abs=1e-12)
    assert sf.ddw1(0) == pytest.approx(0.5, abs=1e-12)
    assert sf.ratio(0) == pytest.approx(1 / SQRT_PI, abs=1e-12)
    assert sf.f_wronskian(0) == pytest.approx(math.pi / 4 - 0.5, abs=1e-12)


def test_wronskian_decays_and_decreases():
    assert 0 <= sf.f_wronskian(30) < 1e-12
    assert 0 < sf.f_wronskian(1) < sf.f_wronskian(0)


def test_extreme_arguments():
    assert 0 < sf.tail_integral(40) < 1e-170
    assert sf.dw1(-40) == pytest.approx(-SQRT_PI, rel=1e-15)
    assert sf.w1(-40) == pytest.approx(40 * SQRT_PI, rel=1e-15)
    assert sf.w0(3.5) == 3.5


@pytest.mark.parametrize("y", [0.01, 0.5, 1.0, 2.9, 3.0, 3.1, 7.0, 20.0, 40.0])
def test_w1_matches_defining_integral(y):
    assert sf.w1(y) == pytest.approx(float(oracles.w1_defining(y)), rel=1e-13)


@pytest.mark.parametrize("y", [-30.0, -6.0, -3.0, -2.0, -0.7, 0.0, 1.3, 5.0, 12.0])
def test_w1_and_tail_match_quadrature(y):
    assert sf.w1(y) == pytest.approx(float(oracles.w1_analytic(y)), rel=1e-13)
    assert sf.tail_integral(y) == pytest.approx(float(oracles.tail(y)), rel=1e-14)


@pytest.mark.parametrize("z", [-5.0, -1.49, -0.3, 0.0, 0.2, 1.49, 1.51, 2.5, 6.0, 26.0])
def test_erfc_against_mpmath(z):
    assert sf.erfc(z) == pytest.approx(float(mpmath.erfc(z)), rel=1e-14)
    assert sf.erfcx(z) == pytest.approx(float(mpmath.exp(mpmath.mpf(z) ** 2) * mpmath.erfc(z)), rel=1e-14)


@pytest.mark.parametrize("y", [-8.0, -1.0, 0.5, 2.0, 5.0, 30.0, 150.0])
def test_ratio_against_quadrature(y):
    assert sf.ratio(y) == pytest.approx(float(oracles.ratio(y)), rel=1e-13)


def test_ratio_large_argument_asymptote():
    # ratio = 1/y - 4/y^3 + 40/y^5 - ...; bounded above by 1/y
    for y in [50.0, 200.0, 1e3]:
        r = sf.ratio(y)
        assert r < 1 / y
        assert abs(r - (1 / y - 4 / y**3)) <= 41 / y**5


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_rejected(bad):
    for fn in (sf.w1, sf.dw1, sf.ddw1, sf.ratio, sf.tail_integral, sf.erfc):
        with pytest.raises(ValueError):
            fn(bad)


@given(finite_y)
def test_homogeneous_ode_residual(y):
    res = 0.5 * sf.w1(y) - 0.5 * y * sf.dw1(y) - sf.ddw1(y)
    assert abs(res) <= 1e-11


@given(finite_y)
def test_w0_solves_ode_exactly(y):
    assert 0.5 * sf.w0(y) - 0.5 * y * 1.0 - 0.0 == 0.0


@given(st.floats(-10, 10, allow_nan=False))
def test_second_derivative_consistency(y):
    h = 1e-4
    num = (sf.w1(y + h) - 2 * sf.w1(y) + sf.w1(y - h)) / h**2
    d = sf.ddw1(y)
    assert abs(num - d) <= 1e-6 * (1 + abs(d))


def test_second_derivative_consistency_dense():
    h = 1e-4
    for y in np.linspace(-10, 10, 4001):
        num = (sf.w1(y + h) - 2 * sf.w1(y) + sf.w1(y - h)) / h**2
        d = sf.ddw1(y)
        assert abs(num - d) <= 1e-6 * (1 + abs(d)), y


@given(st.floats(-38, 38, allow_nan=False))
def test_gaussian_symmetry(y):
    assert abs(sf.tail_integral(y) + sf.tail_integral(-y) - 2 * SQRT_PI) <= 1e-12


@given(st.floats(-60, 60, allow_nan=False), st.floats(1e-3, 10))
def test_ratio_strictly_decreasing(y, gap):
    assert sf.ratio(y) > sf.ratio(y + gap)


@given(st.floats(-30, 30, allow_nan=False))
def test_ratio_derivative_negative_and_consistent(y):
    d = sf.ratio_derivative(y)
    assert d < 0
    h = 1e-5
    num = (sf.ratio(y + h) - sf.ratio(y - h)) / (2 * h)
    assert num == pytest.approx(d, rel=1e-5, abs=1e-9)


@given(st.floats(-30, 30, allow_nan=False))
def test_w1_positive_decreasing_convex(y):
    assert sf.w1(y) > 0
    assert sf.dw1(y) < 0
    assert sf.ddw1(y) >= 0
