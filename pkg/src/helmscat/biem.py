"""Nystrom solver for the combined-layer boundary integral equation.

The scattered field is sought as

    v(x) = int_Gamma {dPhi(x, y)/dnu(y) - i eta Phi(x, y)} phi(y) ds(y),
    Phi(x, y) = (i/4) H_0(k |x - y|),

which on a smooth boundary ``z(t)`` leads to the second-kind equation

    psi(t) - int_0^{2pi} {L(t, s) + i eta M(t, s)} psi(s) ds = 2 f(z(t))

with ``psi(t) = phi(z(t))``.  Both kernels have a logarithmic singularity at
``s = t``.  Each is split as ``K1(t, s) ln(4 sin^2((t - s)/2)) + K2(t, s)``
with ``K1``, ``K2`` analytic; the log part is integrated with the periodic
weights ``R_j`` on ``2n`` equispaced nodes and the smooth part with the
trapezoidal rule.  The scheme converges exponentially for analytic data.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from ._kernels import EULER_GAMMA, jy_table
from .geometry import Boundary

logger = logging.getLogger(__name__)

__all__ = [
    "CombinedLayerDensity",
    "log_weights",
    "nodes",
    "solve_density",
    "solve_dirichlet",
    "solve_dirichlet_many",
    "far_field_biem",
    "potential",
]


@dataclass(frozen=True)
class CombinedLayerDensity:
    """Density values ``psi(t_j)`` at ``t_j = pi j / n``, j = 0..2n-1."""

    boundary: Boundary
    n: int
    values: np.ndarray
    k: float
    eta: float

    def __post_init__(self):
        if self.values.shape != (2 * self.n,):
            raise ValueError(f"expected {2 * self.n} density values, got {self.values.shape}")
        if not self.eta > 0:
            raise ValueError("coupling parameter must be positive")


def nodes(n: int) -> np.ndarray:
    """Quadrature nodes ``t_j = pi j / n``."""
    return math.pi * np.arange(2 * n) / n


def log_weights(n: int) -> np.ndarray:
    """Weights ``R_j(t_0)`` for ``int ln(4 sin^2((t_0 - s)/2)) g(s) ds``.

    ``R_j(t_i)`` depends only on ``(i - j) mod 2n``, so one row suffices.
    """
    t = nodes(n)
    m = np.arange(1, n)
    R = -(2 * math.pi / n) * (np.cos(np.outer(t, m)) / m).sum(axis=1) - (math.pi / n**2) * np.cos(n * t)
    return R


def _check_smooth(b: Boundary) -> None:
    if not getattr(b, "smooth", False):
        raise ValueError(f"the Nystrom scheme needs a smooth boundary, got {b.kind}")


def _system_matrix(b: Boundary, k: float, eta: float, n: int) -> np.ndarray:
    t = nodes(n)
    z = b.point(t)
    dz = b.derivative(t)
    ddz = b.second_derivative(t)
    speed = np.hypot(dz[:, 0], dz[:, 1])

    dx = z[:, None, 0] - z[None, :, 0]  # z1(t) - z1(s)
    dy = z[:, None, 1] - z[None, :, 1]
    r = np.hypot(dx, dy)
    diag = np.eye(2 * n, dtype=bool)
    rs = np.where(diag, 1.0, r)
    jt, yt = jy_table(1, k * rs)
    J0 = jt[0].reshape(rs.shape)
    J1 = jt[1].reshape(rs.shape)
    H0 = J0 + 1j * yt[0].reshape(rs.shape)
    H1 = J1 + 1j * yt[1].reshape(rs.shape)

    # {z2'(s)[z1(t) - z1(s)] - z1'(s)[z2(t) - z2(s)]}
    cross = dz[None, :, 1] * dx - dz[None, :, 0] * dy
    tdiff = t[:, None] - t[None, :]
    logw = np.log(4.0 * np.sin(0.5 * tdiff) ** 2, where=~diag, out=np.zeros_like(tdiff))

    Lk = -(0.5j * k) * cross * H1 / rs
    L1 = (k / (2 * math.pi)) * cross * J1 / rs
    L2 = Lk - L1 * logw
    curv = (dz[:, 0] * ddz[:, 1] - dz[:, 1] * ddz[:, 0]) / speed**2
    L1[diag] = 0.0
    L2[diag] = curv / (2 * math.pi)

    Mk = 0.5j * H0 * speed[None, :]
    M1 = -(1.0 / (2 * math.pi)) * J0 * speed[None, :]
    M2 = Mk - M1 * logw
    M1[diag] = -speed / (2 * math.pi)
    M2[diag] = (0.5j - EULER_GAMMA / math.pi - np.log(0.5 * k * speed) / math.pi) * speed

    K1 = L1 + 1j * eta * M1
    K2 = L2 + 1j * eta * M2
    R = log_weights(n)
    idx = (np.arange(2 * n)[:, None] - np.arange(2 * n)[None, :]) % (2 * n)
    return np.eye(2 * n) - (R[idx] * K1 + (math.pi / n) * K2)


def solve_density(b: Boundary, f, k: float, eta: float | None = None, n: int = 64) -> CombinedLayerDensity:
    """Solve the combined-layer equation for boundary data ``f``.

    Parameters
    ----------
    b : Boundary
        Smooth closed curve (circle, ellipse or kite).
    f : array of length 2n, or callable ``f(points) -> values``
        Dirichlet data for the scattered field at the quadrature nodes.
    k : float
        Wavenumber.
    eta : float, optional
        Coupling parameter; defaults to ``k``.
    n : int
        Half the number of quadrature nodes.

    Raises
    ------
    numpy.linalg.LinAlgError
        If the discretised system is singular.
    """
    _check_smooth(b)
    if n < 2:
        raise ValueError("need n >= 2")
    eta = float(k if eta is None else eta)
    t = nodes(n)
    rhs = np.asarray(f(b.point(t)) if callable(f) else f, dtype=complex)
    if rhs.shape != (2 * n,):
        raise ValueError(f"boundary data must have length {2 * n}")
    psi = scipy.linalg.lu_solve(_factor(b, k, eta, n), 2.0 * rhs)
    return CombinedLayerDensity(b, n, psi, float(k), eta)


def _factor(b: Boundary, k: float, eta: float, n: int):
    A = _system_matrix(b, k, eta, n)
    try:
        lu = scipy.linalg.lu_factor(A, check_finite=True)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise np.linalg.LinAlgError(f"Nystrom matrix factorisation failed: {exc}") from exc
    if np.any(np.abs(np.diag(lu[0])) < 1e-14 * np.abs(lu[0]).max()):
        raise np.linalg.LinAlgError("Nystrom matrix is numerically singular")
    return lu


def solve_dirichlet(b: Boundary, k: float, alpha=(1.0, 0.0), n: int = 64, eta: float | None = None) -> CombinedLayerDensity:
    """Sound-soft scattering of ``exp(i k alpha . x)``: data ``f = -u_inc``."""
    al = np.asarray(alpha, dtype=float)
    return solve_density(b, lambda p: -np.exp(1j * k * (p @ al)), k, eta, n)


def solve_dirichlet_many(b: Boundary, k: float, alphas, n: int = 64,
                         eta: float | None = None) -> list[CombinedLayerDensity]:
    """Densities for several incident directions with one factorisation."""
    _check_smooth(b)
    eta = float(k if eta is None else eta)
    al = np.atleast_2d(np.asarray(alphas, dtype=float))
    z = b.point(nodes(n))
    rhs = -np.exp(1j * k * (z @ al.T))
    psi = scipy.linalg.lu_solve(_factor(b, k, eta, n), 2.0 * rhs)
    return [CombinedLayerDensity(b, n, psi[:, i].copy(), float(k), eta) for i in range(al.shape[0])]


def far_field_biem(d: CombinedLayerDensity, alpha_prime) -> np.ndarray | complex:
    """Far-field pattern of the combined-layer potential.

    ``A(a') = e^{-i pi/4}/sqrt(8 pi k) int {k nu(y) . a' + eta} e^{-i k a' . y} phi(y) ds``
    by the trapezoidal rule.
    """
    a = np.asarray(alpha_prime, dtype=float)
    dirs = a.reshape(-1, 2)
    t = nodes(d.n)
    z = d.boundary.point(t)
    dz = d.boundary.derivative(t)
    speed = np.hypot(dz[:, 0], dz[:, 1])
    nu_s = np.column_stack([dz[:, 1], -dz[:, 0]])  # nu |z'|
    integrand = (d.k * dirs @ nu_s.T + d.eta * speed[None, :]) * np.exp(-1j * d.k * dirs @ z.T)
    A = np.exp(-0.25j * math.pi) / math.sqrt(8 * math.pi * d.k) * (math.pi / d.n) * (integrand @ d.values)
    return complex(A[0]) if a.ndim == 1 else A.reshape(a.shape[:-1])


def potential(d: CombinedLayerDensity, x) -> np.ndarray | complex:
    """Evaluate the combined-layer potential at exterior points ``x``."""
    x = np.asarray(x, dtype=float)
    pts = x.reshape(-1, 2)
    t = nodes(d.n)
    z = d.boundary.point(t)
    dz = d.boundary.derivative(t)
    speed = np.hypot(dz[:, 0], dz[:, 1])
    diff = z[None, :, :] - pts[:, None, :]  # y - x
    r = np.hypot(diff[..., 0], diff[..., 1])
    if np.any(r < 1e-12):
        raise ValueError("evaluation point lies on the boundary")
    jt, yt = jy_table(1, d.k * r)
    H0 = (jt[0] + 1j * yt[0]).reshape(r.shape)
    H1 = (jt[1] + 1j * yt[1]).reshape(r.shape)
    nu_dot = diff[..., 0] * dz[None, :, 1] - diff[..., 1] * dz[None, :, 0]  # (y - x) . nu |z'|
    kern = -(0.25j * d.k) * H1 * nu_dot / r - 1j * d.eta * 0.25j * H0 * speed[None, :]
    v = (math.pi / d.n) * (kern @ d.values)
    return complex(v[0]) if x.ndim == 1 else v.reshape(x.shape[:-1])
