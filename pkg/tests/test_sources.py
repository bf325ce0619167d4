import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from freebound.sources import SourceTerm


def test_parse_round_trip():
    for text in ["zero", "const:0.5", "invsqrt:2.0"]:
        src = SourceTerm.parse(text)
        assert SourceTerm.parse(src.spec()) == src


@pytest.mark.parametrize("text", ["", "const", "const:x", "invsqrt:0", "const:-1", "heat:3", "zero:1"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        SourceTerm.parse(text)


def test_bounds():
    assert SourceTerm.zero().sup_norm() == 0
    assert SourceTerm.constant(3).sup_norm() == 3
    assert not SourceTerm.inverse_sqrt_time(1).bounded
    assert SourceTerm.inverse_sqrt_time(1).sup_norm() == math.inf
    tab = SourceTerm.tabulated([0, 1, 2], [0.0, 4.0, 1.0])
    assert tab.bounded and tab.sup_norm() == 4.0


def test_tabulated_validation():
    with pytest.raises(ValueError):
        SourceTerm.tabulated([0, 0, 1], [1, 1, 1])
    with pytest.raises(ValueError):
        SourceTerm.tabulated([0, 1], [1, -1])
    with pytest.raises(ValueError):
        SourceTerm.tabulated([0, 1], [[1, 1]], ts=[0.0, 1.0])


def test_tabulated_time_interpolation():
    src = SourceTerm.tabulated([0, 1], [[0.0, 0.0], [2.0, 4.0]], ts=[0.0, 1.0])
    assert src(0.5, 0.5) == pytest.approx(1.5)
    assert src(0.5, 7.0) == pytest.approx(3.0)


def test_singular_source_at_zero():
    src = SourceTerm.inverse_sqrt_time(1)
    with pytest.raises(ValueError):
        src(0.0, 0.0)


@given(st.floats(0, 5), st.floats(1e-4, 1))
def test_step_average_exact_for_inverse_sqrt(t, dt):
    src = SourceTerm.inverse_sqrt_time(1.5)
    avg = float(src.step_average(0.0, t, dt))
    # tanh-sinh copes with the r^(-1/2) singularity just left of t
    ref = mpmath.quad(lambda r: 1.5 / mpmath.sqrt(r), [t, t + dt])
    assert avg == pytest.approx(float(ref) / dt, rel=1e-9)


@given(st.floats(0.1, 10), st.floats(-3, 3))
def test_laplace_tabulated_against_quadrature(lam, shift):
    xs = np.array([-1.0, 0.0, 0.5, 2.0, 3.0])
    vals = np.array([1.0, 2.0, 0.0, 3.0, 1.0])
    src = SourceTerm.tabulated(xs, vals)
    f = lambda x: math.exp(-lam * x) * np.interp(x + shift, xs, vals)
    brk = [k - shift for k in xs if k - shift > 0]
    ref, _ = integrate.quad(f, 0, 60 / lam + 10, points=brk or None, limit=200,
                            epsabs=1e-13, epsrel=1e-12)
    assert src.laplace_in_x(lam, 0.0, shift) == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_laplace_closed_forms():
    assert SourceTerm.zero().laplace_in_x(2.0, 1.0) == 0
    assert SourceTerm.constant(3.0).laplace_in_x(2.0, 1.0) == 1.5
    assert SourceTerm.inverse_sqrt_time(1.0).laplace_in_x(2.0, 4.0) == 0.25
    with pytest.raises(ValueError):
        SourceTerm.constant(1).laplace_in_x(0.0, 1.0)
