import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helmscat.geometry import Circle, Ellipse, polar_directions, support_function_exact
from helmscat.oracles import CircleScatterer, circle_amplitude
from helmscat.sfm import (
    AmplitudePairSet,
    SupportSamples,
    approx_amplitude,
    localize_halfplanes,
    make_pair_set,
    pair_grid,
    psi_objective,
    recover_support_dirichlet,
    recover_support_robin,
    reconstruct_boundary,
    robin_pair_grid,
)

C62 = CircleScatterer((6.0, 2.0), 1.0)


def _exact(k, s=C62):
    return lambda ap, al: circle_amplitude(s, k, ap, al)


def test_approx_amplitude_magnitude():
    a = approx_amplitude(0.37, 1.0, (1, 0), (-1, 0), 2.0)
    assert abs(a) == pytest.approx(math.sqrt(2) / 2)


@given(ang=st.floats(0, 2 * math.pi), n=st.integers(2, 30))
def test_pair_grid_identity(ang, n):
    l = polar_directions(ang)
    al, ap = pair_grid(l, n)
    diff = al - ap
    np.testing.assert_allclose(diff @ l, np.linalg.norm(diff, axis=1), atol=1e-12)
    assert np.all(np.abs(al @ l) > 1 / math.sqrt(2))


def test_pair_grid_reflection_and_errors():
    al, ap = pair_grid((1.0, 0.0), 4)
    b = np.arctan2(al[:, 1], al[:, 0])
    np.testing.assert_allclose(np.arctan2(ap[:, 1], ap[:, 0]) % (2 * math.pi), (math.pi - b) % (2 * math.pi))
    with pytest.raises(ValueError):
        pair_grid((1.0, 0.0), 1)
    with pytest.raises(ValueError):
        robin_pair_grid((1.0, 0.0), 4)
    t = np.linalg.norm(np.subtract(*robin_pair_grid((1.0, 0.0), 32)), axis=1)
    assert np.all(np.diff(t) > 0) and t[-1] == pytest.approx(2.0) and t[0] > math.sqrt(2)


def test_pair_set_validation():
    with pytest.raises(ValueError):  # alpha = alpha' (beta = pi/2)
        AmplitudePairSet((1.0, 0.0), [(0.0, 1.0)], [(0.0, 1.0)], [1.0], 1.0)
    with pytest.raises(ValueError):  # wrong direction
        AmplitudePairSet((0.0, 1.0), [(1.0, 0.0)], [(-1.0, 0.0)], [1.0], 1.0)
    with pytest.raises(ValueError):  # outside the aperture
        a = polar_directions(1.2)
        AmplitudePairSet((1.0, 0.0), [a], [polar_directions(math.pi - 1.2)], [1.0], 1.0)


@given(d0=st.floats(-15, 15), k=st.sampled_from([1.0, 3.0, 5.0]), ang=st.floats(0, 2 * math.pi))
def test_exact_model_recovered(d0, k, ang):
    s = make_pair_set(polar_directions(ang), lambda ap, al: approx_amplitude(d0, 2.0, al, ap, k), k)
    assert recover_support_dirichlet(s) == pytest.approx(d0, abs=1e-5)


@given(c=st.floats(1e-3, 1e3))
def test_positive_scale_invariance(c):
    s = make_pair_set((1.0, 0.0), _exact(1.0), 1.0)
    s2 = AmplitudePairSet(s.l, s.alpha, s.alpha_prime, c * s.A, s.k)
    assert recover_support_dirichlet(s2) == pytest.approx(recover_support_dirichlet(s), abs=1e-9)


@pytest.mark.parametrize("k,tol", [(5.0, 0.1), (1.0, 0.3)])
def test_circle_support(k, tol):
    s = make_pair_set((1.0, 0.0), _exact(k), k, n_pairs=12)
    assert recover_support_dirichlet(s) == pytest.approx(5.0, abs=tol)


@pytest.mark.parametrize("k", [1.0, 5.0])
def test_minimiser_unique_in_bracket(k):
    s = make_pair_set((1.0, 0.0), _exact(k), k, n_pairs=12)
    psi = psi_objective(s)
    t = np.linspace(-20, 20, 400001)
    v = psi(t)
    i = int(np.argmin(v))
    far = np.abs(t - t[i]) > math.pi / k
    assert v[far].min() > v[i] + 1e-3 * len(s)


def test_zero_amplitudes_rejected():
    s = make_pair_set((1.0, 0.0), lambda ap, al: 0.0, 1.0)
    with pytest.raises(ValueError):
        recover_support_dirichlet(s)


def test_robin_exact_line():
    l = np.array([1.0, 0.0])
    al, ap = robin_pair_grid(l, 32)
    t = np.linalg.norm(al - ap, axis=1)
    k, c1, c2 = 3.0, -2.7, 0.4
    s = AmplitudePairSet(l, al, ap, 0.5 * np.exp(1j * (c1 * t + c2)), k)
    d, h = recover_support_robin(s)
    assert d == pytest.approx(c1 / k, abs=1e-12)
    assert h == pytest.approx(-k * math.tan(c2 / 2), rel=1e-10)


def test_robin_unwrap_guard():
    l = np.array([1.0, 0.0])
    al, ap = robin_pair_grid(l, 8)
    t = np.linalg.norm(al - ap, axis=1)
    s = AmplitudePairSet(l, al, ap, np.exp(1j * 60.0 * t), 1.0)
    with pytest.raises(ValueError):
        recover_support_robin(s)


def test_robin_dirichlet_limit():
    s = make_pair_set((1.0, 0.0), _exact(3.0, CircleScatterer(h=1e8)), 3.0, n_pairs=32, robin=True)
    d, _ = recover_support_robin(s)
    assert abs(d + 1.0) < 0.1


def test_reconstruct_unit_circle_exact():
    S = SupportSamples.uniform(-np.ones(24))
    P = reconstruct_boundary(S)
    np.testing.assert_allclose(np.linalg.norm(P, axis=1), 1.0, atol=1e-12)


def test_reconstruct_shifted_circle():
    c = Circle((6.0, 2.0), 1.0)
    t = 2 * math.pi * np.arange(40) / 40
    S = SupportSamples(t, np.array([support_function_exact(c, l) for l in polar_directions(t)]))
    P = reconstruct_boundary(S)
    assert np.max(np.abs(np.linalg.norm(P - [6.0, 2.0], axis=1) - 1.0)) < 2e-2
    with pytest.raises(ValueError):
        reconstruct_boundary(SupportSamples.uniform(np.ones(6)))


@given(a=st.floats(0.5, 2.5), b=st.floats(0.5, 2.5), cx=st.floats(-5, 5), cy=st.floats(-5, 5))
def test_support_round_trip(a, b, cx, cy):
    e = Ellipse(a, b, (cx, cy))
    S = SupportSamples.uniform([support_function_exact(e, l) for l in polar_directions(2 * math.pi * np.arange(256) / 256)])
    P = reconstruct_boundary(S)
    r = ((P[:, 0] - cx) / a) ** 2 + ((P[:, 1] - cy) / b) ** 2
    ecc = max(a, b) / min(a, b)
    assert np.max(np.abs(r - 1.0)) < 2e-3 * ecc**4


def test_uniform_grid_required():
    with pytest.raises(ValueError):
        SupportSamples(np.array([0.0, 0.1, 0.5]), np.zeros(3))


def test_halfplanes_unit_disk():
    S = SupportSamples.uniform(-np.ones(16))
    x = np.arange(-1.5, 1.5 + 1e-9, 0.02)
    mask = localize_halfplanes(S, x, x)
    X, Y = np.meshgrid(x, x)
    r = np.hypot(X, Y)
    assert r[mask].max() < 1.0 + 0.05
    assert mask[r < 1.0 - 0.02].all()


def test_halfplanes_vacuous_and_empty():
    x = np.linspace(0, 1, 5)
    assert localize_halfplanes(SupportSamples(np.zeros(0), np.zeros(0)), x, x).all()
    with pytest.warns(RuntimeWarning):
        localize_halfplanes(SupportSamples.uniform(np.full(8, 10.0)), x, x)


def test_ratio_error_grows_away_from_l():
    for k in (1.0, 5.0):
        err = []
        for i in (0, 8):
            be = i * math.pi / 24
            al, ap = polar_directions(be), polar_directions(math.pi - be)
            r = approx_amplitude(5.0, 1.0, al, ap, k) / circle_amplitude(C62, k, ap, al)
            err.append(abs(r - 1))
        assert err[0] < err[1]
