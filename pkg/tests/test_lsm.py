import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helmscat.geometry import polar_directions
from helmscat.lsm import FarFieldMatrix, build_rhs, scan, square_grid, zeta_norm_ck, zeta_norm_kirsch
from helmscat.oracles import CircleScatterer, circle_far_field_matrix

N = 32


def _circle_matrix(k, center=(0.0, 0.0), n=N):
    ang = 2 * math.pi * np.arange(n) / n
    return FarFieldMatrix(circle_far_field_matrix(CircleScatterer(center, 1.0), k, ang, ang), k)


@given(s=st.floats(1e-3, 1e3), seed=st.integers(0, 2**16))
def test_scaled_identity(s, seed):
    f = np.random.default_rng(seed).normal(size=8) + 1j * np.random.default_rng(seed + 1).normal(size=8)
    m = FarFieldMatrix(s * np.eye(8), 1.0)
    assert zeta_norm_ck(m, f) == pytest.approx(np.linalg.norm(f) / s, rel=1e-12)
    assert zeta_norm_kirsch(m, f) == pytest.approx(np.linalg.norm(f) / math.sqrt(s), rel=1e-12)


@given(c=st.floats(1e-2, 1e2))
def test_homogeneity(c):
    rng = np.random.default_rng(11)
    m = FarFieldMatrix(rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16)), 1.0)
    f = build_rhs((0.3, -0.2), m.directions, 1.0)
    mc = FarFieldMatrix(c * m.F, 1.0)
    assert zeta_norm_ck(mc, f) == pytest.approx(zeta_norm_ck(m, f) / c, rel=1e-9)
    assert zeta_norm_kirsch(mc, f) == pytest.approx(zeta_norm_kirsch(m, f) / math.sqrt(c), rel=1e-9)


def test_permutation_invariance():
    m = _circle_matrix(2.0, n=16)
    f = build_rhs((0.4, 0.1), m.directions, 2.0)
    p = np.random.default_rng(3).permutation(16)
    mp = FarFieldMatrix(m.F[p][:, p], 2.0)
    assert zeta_norm_ck(mp, f[p]) == pytest.approx(zeta_norm_ck(m, f), rel=1e-9)
    assert zeta_norm_kirsch(mp, f[p]) == pytest.approx(zeta_norm_kirsch(m, f), rel=1e-9)


def test_build_rhs_values():
    d = polar_directions(2 * math.pi * np.arange(N) / N)
    c = 1 / math.sqrt(8 * math.pi)
    f = build_rhs((10.0, 15.0), d, 1.0)
    np.testing.assert_allclose(np.abs(f), c, rtol=1e-14)
    np.testing.assert_allclose(build_rhs((0.0, 0.0), d, 1.0), c * np.exp(0.25j * math.pi), rtol=1e-14)
    # alpha_0 = (1, 0): phase pi/4 - 10
    assert f[0] == pytest.approx(c * np.exp(1j * (math.pi / 4 - 10.0)), rel=1e-13)
    assert build_rhs(np.zeros((3, 5, 2)), d, 1.0).shape == (N, 3, 5)


def test_rank_one_matrix():
    u = np.exp(1j * np.arange(8))
    m = FarFieldMatrix(np.outer(u, u.conj()) / 8, 1.0)
    f = u / math.sqrt(8)
    assert zeta_norm_ck(m, f, cutoff=1e-10) == pytest.approx(1.0, rel=1e-10)
    assert zeta_norm_kirsch(m, f, cutoff=1e-10) == pytest.approx(1.0, rel=1e-10)


def test_errors():
    with pytest.raises(ValueError):
        zeta_norm_ck(FarFieldMatrix(np.zeros((4, 4)), 1.0), np.ones(4))
    with pytest.raises(ValueError):
        FarFieldMatrix(np.zeros((3, 4)), 1.0)


@pytest.mark.parametrize("k", [1.0, 5.0])
def test_circle_singular_values_match_fft(k):
    m = _circle_matrix(k, n=64)
    # centred circle: F is circulant, singular values are |DFT of a column|
    eig = np.sort(np.abs(np.fft.fft(m.F[:, 0])))[::-1]
    np.testing.assert_allclose(m.decomposition.w, eig, atol=1e-8 * eig[0])


@pytest.mark.parametrize("k", [1.0, 5.0])
def test_indicator_minimum_inside(k):
    m = _circle_matrix(k, center=(10.0, 15.0))
    for fn in (zeta_norm_ck, zeta_norm_kirsch):
        inside = fn(m, build_rhs((10.0, 15.0), m.directions, k))
        outside = fn(m, build_rhs((14.0, 15.0), m.directions, k))
        assert inside < outside


def test_scan_locates_circle():
    m = _circle_matrix(1.0, center=(10.0, 15.0))
    x, y = square_grid((10.0, 15.0), 12.0, 61)
    s = scan(m, x, y)
    assert s.log_ck.shape == (61, 61) and s.rows().shape == (61 * 61, 4)
    for v in ("ck", "kirsch"):
        assert np.linalg.norm(s.argmin(v) - [10.0, 15.0]) < 1.5
    # Kirsch squares fewer singular values into the denominator: flatter, not sharper
    assert np.ptp(s.log_k) <= np.ptp(s.log_ck)
