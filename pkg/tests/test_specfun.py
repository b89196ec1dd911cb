import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from helmscat import specfun
from helmscat._kernels import jy_table

mpmath.mp.dps = 30

# Frozen values (independent mpmath evaluation at 30 digits).
FROZEN = [
    (0, 1.0, 0.7651976865579666, 0.08825696421567696),
    (1, 1.0, 0.4400505857449335, -0.7812128213002887),
    (6, 1.0, 2.093833800238927e-05, -2570.78024322915),
    (5, 5.0, 0.26114054612017007, -0.4536948224911019),
    (10, 30.0, -0.12987689399858876, 0.07505670212239711),
]


@pytest.mark.parametrize("l,x,j,y", FROZEN)
def test_frozen_values(l, x, j, y):
    assert specfun.bessel_j(l, x) == pytest.approx(j, rel=1e-13)
    assert specfun.bessel_y(l, x) == pytest.approx(y, rel=1e-13)


@pytest.mark.parametrize("l", [0, 1, 2, 5, 11, 30, 60])
@pytest.mark.parametrize("x", [1e-3, 0.1, 0.9, 3.7, 12.0, 47.5, 99.0])
def test_against_mpmath(l, x):
    j = float(mpmath.besselj(l, x))
    y = float(mpmath.bessely(l, x))
    assert specfun.bessel_j(l, x) == pytest.approx(j, rel=1e-12, abs=1e-300)
    if math.isfinite(y) and abs(y) < 1e300:
        assert specfun.bessel_y(l, x) == pytest.approx(y, rel=1e-12)


@given(l=st.integers(0, 40), x=st.floats(0.05, 80.0))
def test_wronskian(l, x):
    jt, yt = jy_table(l + 1, np.array([x]))
    w = jt[l + 1, 0] * yt[l, 0] - jt[l, 0] * yt[l + 1, 0]
    scale = max(1.0, abs(jt[l + 1, 0] * yt[l, 0]), abs(jt[l, 0] * yt[l + 1, 0]))
    assert abs(w - 2 / (math.pi * x)) <= 1e-12 * scale


@given(l=st.integers(1, 40), x=st.floats(0.1, 80.0))
def test_three_term_recurrence(l, x):
    jt, yt = jy_table(l + 1, np.array([x]))
    for t in (jt[:, 0], yt[:, 0]):
        lhs = t[l - 1] + t[l + 1]
        rhs = 2 * l / x * t[l]
        assert abs(lhs - rhs) <= 1e-11 * max(abs(lhs), abs(rhs), abs(t[l - 1]), abs(t[l + 1]), 1e-300)


@given(l=st.integers(-20, 20), x=st.floats(0.1, 40.0))
def test_hankel_parity(l, x):
    assert specfun.hankel1(-l, x) == pytest.approx((-1) ** l * specfun.hankel1(l, x), rel=1e-14)


@pytest.mark.parametrize("l", [-3, 0, 2, 7])
def test_hankel_derivative_matches_difference(l):
    x, h = 2.3, 1e-5
    fd = (specfun.hankel1(l, x + h) - specfun.hankel1(l, x - h)) / (2 * h)
    assert specfun.hankel1_derivative(l, x) == pytest.approx(fd, rel=1e-8)
    fdj = (specfun.bessel_j(abs(l), x + h) - specfun.bessel_j(abs(l), x - h)) / (2 * h) * (-1) ** (l if l < 0 else 0)
    assert specfun.bessel_j_derivative(l, x) == pytest.approx(fdj, rel=1e-8)


def test_hankel_orders_layout():
    x = np.array([0.5, 2.0, 9.0])
    H = specfun.hankel1_orders(4, x)
    assert H.shape == (9, 3)
    for i, l in enumerate(range(-4, 5)):
        np.testing.assert_allclose(H[i], specfun.hankel1(l, x), rtol=1e-14)


def test_zero_argument():
    assert specfun.bessel_j(0, 0.0) == 1.0
    assert specfun.bessel_j(3, 0.0) == 0.0
    with pytest.raises(ValueError):
        specfun.bessel_y(0, 0.0)


def test_cylinder_value():
    v = specfun.cylinder_value(2, 1.5)
    assert v.h1 == complex(v.j, v.y)
    assert v.order == 2 and v.argument == 1.5


@pytest.mark.parametrize("call", [
    lambda: specfun.bessel_j(-1, 1.0),
    lambda: specfun.bessel_j(1, -1.0),
    lambda: specfun.bessel_j(specfun.MAX_ORDER + 1, 1.0),
    lambda: specfun.hankel1(2, 0.0),
])
def test_domain_errors(call):
    with pytest.raises(ValueError):
        call()


def test_overflow_is_reported():
    with pytest.raises(OverflowError):
        specfun.bessel_y(200, 1e-3)


@pytest.mark.parametrize("nmax,x", [(8, np.linspace(0.0, 40.0, 57)), (60, np.geomspace(1e-4, 90.0, 41))])
def test_backends_agree(nmax, x):
    a = jy_table(nmax, x, use_numba=True)
    b = jy_table(nmax, x, use_numba=False)
    for u, v in zip(a, b):
        fin = np.isfinite(v)
        assert np.array_equal(fin, np.isfinite(u))
        np.testing.assert_allclose(u[fin], v[fin], rtol=1e-12, atol=1e-15)
