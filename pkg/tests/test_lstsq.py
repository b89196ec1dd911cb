import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from helmscat.lstsq import SpectralLsqProblem, normalized_norm, solve_spectral, svd


def _complex_matrix(draw_shape):
    return st.tuples(
        arrays(np.float64, draw_shape, elements=st.floats(-10, 10)),
        arrays(np.float64, draw_shape, elements=st.floats(-10, 10)),
    ).map(lambda ri: ri[0] + 1j * ri[1])


@st.composite
def full_rank_problem(draw):
    m = draw(st.integers(2, 20))
    n = draw(st.integers(1, min(m, 10)))
    A = draw(_complex_matrix((m, n)))
    b = draw(_complex_matrix((m,)))
    s = np.linalg.svd(A, compute_uv=False)
    if s.min() < 1e-3 * max(s.max(), 1e-300) or s.min() < 1e-6:
        A = A + np.eye(m, n) * (1 + s.max())
    return A, b


@given(full_rank_problem())
def test_matches_normal_equations(prob):
    A, b = prob
    sol = solve_spectral(A, b, w_min=0.0)
    c_ne = np.linalg.solve(A.conj().T @ A, A.conj().T @ b)
    scale = np.linalg.cond(A) * (1 + np.linalg.norm(c_ne))
    assert np.linalg.norm(sol.c - c_ne) <= 1e-9 * scale
    r = np.linalg.norm(A @ sol.c - b) / np.sqrt(A.shape[0])
    assert sol.r_min == pytest.approx(r, rel=1e-8, abs=1e-12)


@given(full_rank_problem())
def test_residual_history_non_increasing(prob):
    A, b = prob
    sol = solve_spectral(A, b, w_min=0.0)
    assert np.all(np.diff(sol.residual_history) <= 1e-12)
    assert sol.residual_history[0] == pytest.approx(normalized_norm(b), rel=1e-12)


@given(full_rank_problem())
def test_svd_reconstructs_with_phase_convention(prob):
    A, _ = prob
    d = svd(A)
    np.testing.assert_allclose(d.reconstruct(), A, atol=1e-10 * (1 + np.abs(A).max()))
    mag = np.abs(d.V)
    first = np.argmax(mag >= (1 - 1e-12) * mag.max(axis=0), axis=0)
    piv = d.V[first, np.arange(d.V.shape[1])]
    np.testing.assert_allclose(piv.imag, 0.0, atol=1e-14)
    assert np.all(piv.real > 0)
    assert np.all(np.diff(d.w) <= 0)


def test_cutoff_discards_dependent_column():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((30, 4)) + 0j
    A = np.column_stack([A, A[:, 0] + 1e-12 * rng.standard_normal(30)])
    b = rng.standard_normal(30) + 0j
    sol = solve_spectral(A, b, w_min=1e-8)
    assert sol.rank_used == 4
    assert np.linalg.norm(sol.c) < 1e3


def test_epsilon_stops_early():
    A = np.diag([4.0, 2.0, 1.0]).astype(complex)
    b = np.array([4.0, 0.2, 0.1], dtype=complex)
    sol = solve_spectral(A, b, epsilon=0.2)
    assert sol.converged and sol.rank_used == 1
    np.testing.assert_allclose(sol.c, [1, 0, 0], atol=1e-14)


def test_exact_identity():
    sol = solve_spectral(SpectralLsqProblem(np.eye(3, dtype=complex), np.ones(3, dtype=complex)))
    np.testing.assert_allclose(sol.c, 1.0)
    assert sol.r_min < 1e-15


def test_reused_decomposition():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((12, 5)) + 1j * rng.standard_normal((12, 5))
    d = svd(A)
    for _ in range(3):
        b = rng.standard_normal(12) + 0j
        np.testing.assert_allclose(solve_spectral(A, b, decomposition=d).c, solve_spectral(A, b).c, atol=1e-12)


@pytest.mark.parametrize("A,b,kw", [
    (np.ones((3, 2)), np.ones(4), {}),
    (np.ones((3, 2)), np.ones(3), {"w_min": -1.0}),
    (np.ones(3), np.ones(3), {}),
])
def test_invalid_problems(A, b, kw):
    with pytest.raises(ValueError):
        solve_spectral(A, b, **kw)


def test_non_finite_matrix():
    with pytest.raises(np.linalg.LinAlgError):
        svd(np.array([[1.0, np.nan]]))
