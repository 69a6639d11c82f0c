import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import hermite as npherm
from numpy.polynomial import laguerre as nplag

from dispersion_lab.special import hermite, laguerre, rect, sinc

finite = st.floats(-6.0, 6.0, allow_nan=False)


@pytest.mark.parametrize("s", range(8))
def test_hermite_matches_numpy(s):
    x = np.linspace(-4, 4, 41)
    ref = npherm.hermval(x, [0] * s + [1])
    assert np.allclose(hermite(s, x), ref, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("s", range(8))
def test_laguerre_matches_numpy(s):
    x = np.linspace(0, 12, 41)
    ref = nplag.lagval(x, [0] * s + [1])
    assert np.allclose(laguerre(s, x), ref, rtol=1e-12, atol=1e-12)


def test_low_orders_by_hand():
    assert hermite(0, 3.0) == 1.0
    assert hermite(1, 3.0) == 6.0
    assert hermite(2, 3.0) == 4 * 9 - 2
    assert laguerre(1, 2.0) == pytest.approx(-1.0)
    assert laguerre(2, 1.0) == pytest.approx(0.5 * (1 - 4 + 2))


@given(finite)
def test_hermite_parity(x):
    for s in range(5):
        assert hermite(s, -x) == pytest.approx((-1) ** s * hermite(s, x), rel=1e-12, abs=1e-9)


def test_negative_order_rejected():
    with pytest.raises(ValueError):
        hermite(-1, 0.0)
    with pytest.raises(ValueError):
        laguerre(-1, 0.0)


def test_sinc_at_zero_and_small():
    assert sinc(0.0) == 1.0
    x = np.array([1e-9, 1e-6, 5e-5, 2e-4])
    assert np.allclose(sinc(x), np.sin(x) / x, rtol=1e-15, atol=0)


@settings(max_examples=200)
@given(st.floats(-50, 50, allow_nan=False))
def test_sinc_even_and_bounded(x):
    assert sinc(x) == sinc(-x)
    assert abs(sinc(x)) <= 1.0


def test_sinc_zeros():
    k = np.arange(1, 6)
    assert np.all(np.abs(sinc(k * math.pi)) < 1e-15)


def test_rect_three_cases():
    assert rect(0.3) == 1.0
    assert rect(0.5) == 0.5
    assert rect(-0.5) == 0.5
    assert rect(0.7) == 0.0
    assert np.array_equal(rect(np.array([-1.0, 0.2, 1.0])), [0.0, 1.0, 0.0])


def test_sinc_reference_values():
    assert sinc(1.0) == pytest.approx(0.8414709848078965, rel=1e-15)
    assert abs(sinc(math.pi)) < 1e-15


@settings(max_examples=60)
@given(st.integers(1, 20), st.floats(-5, 5, allow_nan=False))
def test_hermite_derivative_identity(s, x):
    h = 1e-5 * max(1.0, abs(x))
    d = (hermite(s, x + h) - hermite(s, x - h)) / (2 * h)
    ref = 2 * s * hermite(s - 1, x)
    assert d == pytest.approx(ref, rel=1e-6, abs=1e-6 * math.factorial(min(s, 12)))


def test_laguerre_orthogonality():
    from scipy.integrate import quad

    val, _ = quad(lambda x: math.exp(-x) * laguerre(1, x) * laguerre(2, x), 0, 50, epsabs=1e-12)
    assert abs(val) < 1e-8
    norm, _ = quad(lambda x: math.exp(-x) * laguerre(3, x) ** 2, 0, 50, epsabs=1e-12)
    assert norm == pytest.approx(1.0, abs=1e-8)
