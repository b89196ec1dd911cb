import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from helmscat.geometry import Circle, Ellipse, Kite, named_boundary, polar_directions
from helmscat.mrc import (
    DirectProblem,
    RadiatingExpansion,
    basis_function,
    basis_matrix,
    exact_circle_coefficients,
    far_field,
    far_field_basis,
    fit_far_field,
    near_field,
    solve_direct,
)
from helmscat.oracles import CircleScatterer, circle_amplitude_dirichlet


def _circle_problem(L):
    return DirectProblem(Circle(), 1.0, (1.0, 0.0), L=L, poles=np.zeros((1, 2)))


def test_circle_single_pole_recovers_exact_coefficients():
    e, sol = solve_direct(_circle_problem(5))
    np.testing.assert_allclose(e.coefficients.ravel(), exact_circle_coefficients(1.0, 1.0, 5), atol=1e-12)


def test_circle_residual_is_incident_tail():
    # The boundary misfit is the |l| > L part of exp(i cos t), so
    # r_min^2 = sum_{|l| > 5} J_l(1)^2.
    _, sol = solve_direct(_circle_problem(5))
    tail = math.sqrt(2 * sum(special.jv(l, 1.0) ** 2 for l in range(6, 40)))
    assert sol.r_min == pytest.approx(tail, rel=1e-6)
    assert sol.r_min == pytest.approx(2.96e-5, rel=1e-2)
    _, sol6 = solve_direct(_circle_problem(6))
    assert sol6.r_min < 1e-5


def test_circle_far_field_matches_oracle():
    e, _ = solve_direct(_circle_problem(10))
    th = np.linspace(0, 2 * math.pi, 9)
    ref = [circle_amplitude_dirichlet(CircleScatterer(), 1.0, d, (1, 0)) for d in polar_directions(th)]
    np.testing.assert_allclose(e.far_field(polar_directions(th)), ref, atol=1e-12)


def test_basis_layout_pole_major():
    poles = np.array([[0.1, 0.0], [-0.2, 0.3]])
    t = np.array([0.2, 1.3, 2.9])
    b = Ellipse()
    A = basis_matrix(b.point(t), poles, 2, 1.5)
    assert A.shape == (3, 10)
    for j in range(2):
        for i, l in enumerate(range(-2, 3)):
            np.testing.assert_allclose(A[:, 5 * j + i], basis_function(b, poles[j], l, t, 1.5), rtol=1e-13)


def test_basis_matrix_rejects_pole_on_knot():
    with pytest.raises(ValueError):
        basis_matrix(np.array([[1.0, 0.0]]), np.array([[1.0, 0.0]]), 2, 1.0)


@given(R=st.floats(200.0, 400.0), ang=st.floats(0, 2 * math.pi))
def test_near_far_asymptotic_consistency(R, ang):
    # v(R a) - A(a) e^{ikR}/sqrt(R) = O(R^{-3/2})
    rng = np.random.default_rng(1)
    e = RadiatingExpansion(2.0, np.array([[0.3, -0.1], [-0.2, 0.2]]), 3,
                           rng.standard_normal(14) + 1j * rng.standard_normal(14))
    d = polar_directions(ang)
    A = e.far_field(d)

    def err(r):
        return abs(e.near_field(r * d) - A * np.exp(2j * r) / math.sqrt(r))

    # a-priori bound: first neglected Hankel term plus the pole-offset phase error,
    # summed over coefficients, with a factor 2 for higher-order terms
    k, L = e.k, e.order
    pmax = float(np.max(np.sum(e.poles**2, axis=1)))
    bound = 2 * np.abs(e.coefficients).sum() * math.sqrt(2 / (math.pi * k * R)) * (
        (4 * L**2 - 1) / (8 * k * R) + k * pmax / R)
    assert err(R) < bound
    assert err(4 * R) < 0.25 * err(R)


def test_far_field_linearity():
    poles = np.array([[0.0, 0.0], [0.5, 0.1]])
    rng = np.random.default_rng(2)
    c1 = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    c2 = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    d = polar_directions(np.linspace(0, 6, 5))
    f = lambda c: far_field(RadiatingExpansion(1.0, poles, 1, c), d)
    np.testing.assert_allclose(f(2 * c1 - 3j * c2), 2 * f(c1) - 3j * f(c2), atol=1e-13)


def test_serialisation_round_trip():
    e, _ = solve_direct(DirectProblem(Ellipse(), 1.0, (0.0, 1.0)))
    d = json.loads(json.dumps(e.to_dict()))
    assert len(d["coefficients"]) == 2 * 4 * 11
    e2 = RadiatingExpansion.from_dict(d)
    np.testing.assert_array_equal(e2.coefficients, e.coefficients)
    np.testing.assert_array_equal(e2.poles, e.poles)


def test_solution_satisfies_boundary_condition():
    p = DirectProblem(Ellipse(), 1.0, (1.0, 0.0))
    e, sol = solve_direct(p)
    t = np.linspace(0.01, 2 * math.pi, 97)
    x = p.boundary.point(t)
    total = near_field(e, x) + np.exp(1j * x @ np.array([1.0, 0.0]))
    assert np.sqrt(np.mean(np.abs(total) ** 2)) < 5 * sol.r_min


def test_fit_far_field_single_pole():
    th = 2 * math.pi * np.arange(64) / 64
    target = far_field(RadiatingExpansion(1.0, [[0.8, 0.0]], 3, np.arange(7) + 1j), polar_directions(th))
    e, r, _ = fit_far_field(target, polar_directions(th), (0.8, 0.0), 3, 1.0)
    assert r < 1e-12
    np.testing.assert_allclose(e.coefficients.ravel(), np.arange(7) + 1j, atol=1e-10)


@pytest.mark.parametrize("kw", [dict(k=0.0), dict(alpha=(1.0, 1.0)), dict(M=10), dict(L=-1)])
def test_invalid_problems(kw):
    base = dict(boundary=Ellipse(), k=1.0)
    base.update(kw)
    with pytest.raises(ValueError):
        DirectProblem(**base)


def test_far_field_basis_shapes():
    B = far_field_basis(polar_directions(np.zeros(4)), np.zeros((2, 2)), 2, 1.0)
    assert B.shape == (4, 10)
    with pytest.raises(ValueError):
        far_field_basis(np.zeros(3), np.zeros((1, 2)), 2, 1.0)


@pytest.mark.parametrize("name,J,scale", [("kite", 16, 0.9), ("triangle", 16, 0.9)])
def test_non_elliptic_shapes_solve(name, J, scale):
    e, sol = solve_direct(DirectProblem(named_boundary(name), 1.0, (1.0, 0.0), J=J, scale=scale))
    assert sol.r_min < 0.02
    assert e.coefficients.shape == (J, 11)
