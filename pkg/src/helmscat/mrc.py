"""Multi-pole radiating expansions and the iterative MRC direct solver.

A radiating field is approximated by

    v(x) = sum_j sum_{l=-L..L} c_lj H_l(k |x - x_j|) e^{i l theta_j(x)}

with poles ``x_j`` inside the obstacle and ``theta_j(x)`` the polar angle
of ``x - x_j``.  The solver fits ``v = -u_inc`` at ``M`` uniform boundary
knots by spectral least squares; see :mod:`helmscat.lstsq`.

Coefficients are stored as an array of shape ``(J, 2L+1)``; flattened they
are ordered pole-major, order-minor, matching the matrix columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import jy_table
from .geometry import Boundary, interior_poles, polar_directions
from .lstsq import LsqSolution, SpectralLsqProblem, solve_spectral
from .specfun import hankel1_orders

__all__ = [
    "RadiatingExpansion",
    "DirectProblem",
    "basis_function",
    "basis_matrix",
    "solve_direct",
    "near_field",
    "far_field",
    "far_field_basis",
    "fit_far_field",
    "exact_circle_coefficients",
    "polar_directions",
]

COINCIDENCE_TOL = 1e-12
FAR_PREFACTOR = np.exp(-0.25j * math.pi)


def _far_const(k: float) -> complex:
    return math.sqrt(2.0 / (math.pi * k)) * FAR_PREFACTOR


@dataclass
class RadiatingExpansion:
    """Multi-pole Hankel expansion ``v_eps``."""

    k: float
    poles: np.ndarray
    order: int
    coefficients: np.ndarray

    def __post_init__(self):
        self.poles = np.atleast_2d(np.asarray(self.poles, dtype=float))
        c = np.asarray(self.coefficients, dtype=complex)
        J = self.poles.shape[0]
        if c.size != J * (2 * self.order + 1):
            raise ValueError(f"expected {(2 * self.order + 1) * J} coefficients, got {c.size}")
        self.coefficients = c.reshape(J, 2 * self.order + 1)

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.order, self.order + 1)

    def near_field(self, x) -> np.ndarray | complex:
        return near_field(self, x)

    def far_field(self, alpha_prime) -> np.ndarray | complex:
        return far_field(self, alpha_prime)

    def to_dict(self) -> dict:
        flat = self.coefficients.ravel()
        inter = np.column_stack([flat.real, flat.imag]).ravel()
        return {
            "k": float(self.k),
            "order": int(self.order),
            "poles": [[float(a), float(b)] for a, b in self.poles],
            "coefficients": [float(v) for v in inter],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RadiatingExpansion":
        inter = np.asarray(d["coefficients"], dtype=float)
        return cls(d["k"], np.asarray(d["poles"]), int(d["order"]), inter[0::2] + 1j * inter[1::2])


@dataclass
class DirectProblem:
    """Sound-soft scattering of ``exp(i k alpha . x)`` by ``boundary``.

    Poles default to ``interior_poles(boundary, J, scale)``.
    """

    boundary: Boundary
    k: float
    alpha: tuple[float, float] = (1.0, 0.0)
    L: int = 5
    J: int = 4
    scale: float = 0.7
    M: int = 720
    w_min: float = 1e-8
    epsilon: float = 0.0
    poles: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("wavenumber must be positive")
        a = np.asarray(self.alpha, dtype=float)
        if abs(np.linalg.norm(a) - 1.0) > 1e-12:
            raise ValueError(f"incident direction must be a unit vector, got {self.alpha}")
        if self.L < 0 or self.M < 1:
            raise ValueError("need L >= 0 and M >= 1")
        if self.poles is None:
            self.poles = interior_poles(self.boundary, self.J, self.scale)
        else:
            self.poles = np.atleast_2d(np.asarray(self.poles, dtype=float))
            self.J = self.poles.shape[0]
        if self.M < (2 * self.L + 1) * self.J:
            raise ValueError("need at least as many knots as basis functions")

    @property
    def knots(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.M) / self.M


def _hankel_block(L: int, krho: np.ndarray) -> np.ndarray:
    """H_l(krho) for l = -L..L; shape ``(2L+1,) + krho.shape``."""
    if np.any(~np.isfinite(krho)) or np.any(krho <= 0):
        raise ValueError("Hankel argument must be positive")
    return hankel1_orders(L, krho)


def basis_matrix(points, poles, L: int, k: float) -> np.ndarray:
    """Matrix of ``psi_lj`` at ``points``; shape ``(M, J (2L+1))``.

    Raises
    ------
    ValueError
        If a point coincides with a pole.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    X = np.atleast_2d(np.asarray(poles, dtype=float))
    d = P[:, None, :] - X[None, :, :]
    rho = np.hypot(d[..., 0], d[..., 1])
    if np.any(rho < COINCIDENCE_TOL):
        raise ValueError("evaluation point coincides with a pole")
    theta = np.arctan2(d[..., 1], d[..., 0])
    H = _hankel_block(L, k * rho)
    ls = np.arange(-L, L + 1)
    block = H * np.exp(1j * ls[:, None, None] * theta[None])
    return np.transpose(block, (1, 2, 0)).reshape(P.shape[0], -1)


def basis_function(b: Boundary, pole, l: int, t, k: float):
    """``psi_lj(t) = H_l(k |r(t) - x_j|) exp(i l theta_j(t))``."""
    pts = b.point(np.atleast_1d(np.asarray(t, dtype=float)))
    col = basis_matrix(pts, np.atleast_2d(pole), abs(int(l)), k)[:, int(l) + abs(int(l))]
    return complex(col[0]) if np.ndim(t) == 0 else col


def solve_direct(p: DirectProblem) -> tuple[RadiatingExpansion, LsqSolution]:
    """Fit the scattered field to ``-u_inc`` on the boundary knots."""
    pts = p.boundary.point(p.knots)
    A = basis_matrix(pts, p.poles, p.L, p.k)
    b = -np.exp(1j * p.k * (pts @ np.asarray(p.alpha, dtype=float)))
    sol = solve_spectral(SpectralLsqProblem(A, b, p.w_min, p.epsilon))
    return RadiatingExpansion(p.k, p.poles, p.L, sol.c), sol


def near_field(e: RadiatingExpansion, x):
    """Evaluate the expansion at points ``x`` (shape ``(..., 2)``)."""
    x = np.asarray(x, dtype=float)
    shape = x.shape[:-1]
    A = basis_matrix(x.reshape(-1, 2), e.poles, e.order, e.k)
    v = A @ e.coefficients.ravel()
    return complex(v[0]) if shape == () else v.reshape(shape)


def _directions(alpha_prime) -> tuple[np.ndarray, np.ndarray, tuple]:
    a = np.asarray(alpha_prime, dtype=float)
    if a.ndim == 0 or a.shape[-1] != 2:
        raise ValueError("directions must be unit vectors of shape (..., 2); see polar_directions")
    dirs = a.reshape(-1, 2)
    theta = np.arctan2(dirs[:, 1], dirs[:, 0])
    return dirs, theta, a.shape[:-1]


def far_field_basis(alpha_prime, poles, L: int, k: float) -> np.ndarray:
    """Far-field patterns of the basis functions; shape ``(n_dirs, J (2L+1))``."""
    dirs, theta, _ = _directions(alpha_prime)
    X = np.atleast_2d(np.asarray(poles, dtype=float))
    ls = np.arange(-L, L + 1)
    shift = np.exp(-1j * k * dirs @ X.T)  # (n, J)
    ang = ((-1j) ** ls)[None, :] * np.exp(1j * np.outer(theta, ls))  # (n, 2L+1)
    return _far_const(k) * (shift[:, :, None] * ang[:, None, :]).reshape(dirs.shape[0], -1)


def far_field(e: RadiatingExpansion, alpha_prime):
    """Far-field pattern ``A(alpha')`` of the expansion."""
    _, _, shape = _directions(alpha_prime)
    v = far_field_basis(alpha_prime, e.poles, e.order, e.k) @ e.coefficients.ravel()
    return complex(v[0]) if shape == () else v.reshape(shape)


def fit_far_field(target, alpha_prime, pole, L: int, k: float, w_min: float = 1e-8):
    """Fit a single-pole far field to sampled amplitudes.

    Returns ``(expansion, r_min, solution)`` where ``r_min`` is the residual in
    the norm ``||a||^2 = (1/M) sum |a_i|^2``.
    """
    X = np.atleast_2d(np.asarray(pole, dtype=float))
    B = far_field_basis(alpha_prime, X, L, k)
    sol = solve_spectral(SpectralLsqProblem(B, np.asarray(target, dtype=complex).ravel(), w_min, 0.0))
    return RadiatingExpansion(k, X, L, sol.c), sol.r_min, sol


def exact_circle_coefficients(k: float, radius: float, L: int, beta: float = 0.0) -> np.ndarray:
    """Single-centre expansion of the field scattered by a sound-soft circle.

    ``a_l = -(J_l(ka) / H_l(ka)) i^l e^{-i l beta}`` for ``l = -L..L``.
    """
    jt, yt = jy_table(L, np.array([k * radius]))
    ls = np.arange(-L, L + 1)
    j = jt[np.abs(ls), 0]
    h = j + 1j * yt[np.abs(ls), 0]
    # J_{-l}/H_{-l} = J_l/H_l
    return -(j / h) * (1j**ls) * np.exp(-1j * ls * beta)
