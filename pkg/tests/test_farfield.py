import math

import numpy as np
import pytest

from helmscat.farfield import FarField, grid_pair_set, read_far_field, synthesize_far_field, write_far_field
from helmscat.geometry import Circle, Ellipse, polar_directions
from helmscat.oracles import CircleScatterer, circle_amplitude


def test_analytic_matches_biem_on_circle():
    c = Circle((0.5, -0.3), 1.0)
    a = synthesize_far_field(c, 2.0, 8, 12, "analytic")
    b = synthesize_far_field(c, 2.0, 8, 12, "biem", n=64)
    np.testing.assert_allclose(b.values, a.values, atol=1e-6)


def test_mrc_matches_biem_on_ellipse():
    e = Ellipse(1.0, 0.5)
    a = synthesize_far_field(e, 1.0, 6, 6, "mrc")
    b = synthesize_far_field(e, 1.0, 6, 6, "biem", n=64)
    np.testing.assert_allclose(a.values, b.values, atol=1e-5)


def test_layout_and_lookup():
    s = CircleScatterer((6.0, 2.0), 1.0)
    ff = synthesize_far_field(s, 1.0, 8, 16)
    assert ff.values.shape == (8, 16)
    ap, al = polar_directions(3 * math.pi / 8), polar_directions(math.pi / 4)
    assert ff.amplitude(ap, al) == pytest.approx(circle_amplitude(s, 1.0, ap, al), abs=1e-14)
    with pytest.raises(KeyError):
        ff.amplitude(polar_directions(0.1), al)
    with pytest.raises(ValueError):
        ff.matrix()


def test_round_trip_lossless(tmp_path):
    ff = synthesize_far_field(CircleScatterer(h=0.5), 3.0, 5, 7)
    p = tmp_path / "ff.csv"
    write_far_field(ff, p)
    back = read_far_field(p)
    assert back.k == ff.k
    assert np.array_equal(back.values, ff.values)
    assert np.array_equal(back.beta, ff.beta) and np.array_equal(back.theta, ff.theta)
    write_far_field(back, tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_bytes() == p.read_bytes()


def test_read_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("# k = 1.0\nbeta,theta,re,im\n0.0,0.0,1.0,0.0\n")
    with pytest.raises(ValueError, match="n_in"):
        read_far_field(p)
    p.write_text("# k = 1.0\n# n_in = 2\n# n_out = 1\nbeta,theta,re,im\n0.0,0.0,1.0,0.0\n")
    with pytest.raises(ValueError, match="rows"):
        read_far_field(p)
    p.write_text("# k = 1.0\n# n_in = 1\n# n_out = 1\na,b,c,d\n0.0,0.0,1.0,0.0\n")
    with pytest.raises(ValueError, match="columns"):
        read_far_field(p)


def test_unsupported_combinations():
    with pytest.raises(ValueError):
        synthesize_far_field(Ellipse(1.0, 0.5), 1.0, 4, 4, "analytic")
    with pytest.raises(ValueError):
        synthesize_far_field(Circle(), 1.0, 4, 4, "biem", h=1.0)
    with pytest.raises(ValueError):
        synthesize_far_field(Circle(), 1.0, 4, 4, "bogus")


def test_grid_pair_set():
    ff = synthesize_far_field(CircleScatterer((6.0, 2.0), 1.0), 1.0, 120, 120)
    s = grid_pair_set(ff, 0.0)
    assert len(s) == 29  # |offset| < 45 degrees in 3-degree steps
    assert np.all(np.abs(s.alpha @ s.l) > 1 / math.sqrt(2))
    one = grid_pair_set(ff, 0.0, one_sided=True)
    assert len(one) == 15
    with pytest.raises(ValueError, match="observation grid"):
        grid_pair_set(ff, 0.01)
    small = synthesize_far_field(CircleScatterer(), 1.0, 8, 8)
    with pytest.raises(ValueError, match="three"):
        grid_pair_set(small, 0.0)
