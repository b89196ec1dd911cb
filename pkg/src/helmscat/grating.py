"""Quasiperiodic scattering by a periodic surface ``y = f(x)``.

The incident wave ``u_0 = exp(i k alpha . x)`` with ``alpha = (cos theta,
-sin theta)`` hits an ``L``-periodic surface.  The scattered field is
expanded in the half-space quasiperiodic Green's function

    g(x, xi) = sum_j phi_j(x_1) conj(phi_j(xi_1)) g_j(x_2, xi_2),
    phi_j(s) = e^{i lambda_j s} / sqrt(L),  lambda_j = k cos theta + 2 pi j / L,

which is outgoing upward and vanishes on ``y = -b``.  The mode functions
are ``g_j = v_j(max) psi_j(min)`` with ``v_j(t) = e^{i mu_j t}`` and
``psi_j(t) = e^{i mu_j b} sin(mu_j (t + b)) / mu_j``; they are evaluated in
the combined-exponent form

    g_j = [e^{i mu_j (hi + lo + 2b)} - e^{i mu_j (hi - lo)}] / (2 i mu_j)

so evanescent modes never overflow.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import grating_green_sum
from .geometry import GratingProfile, profile_nodes_and_poles
from .lstsq import LsqSolution, SpectralLsqProblem, solve_spectral

logger = logging.getLogger(__name__)

__all__ = [
    "GratingProblem",
    "ModeData",
    "GratingSolution",
    "mode",
    "mode_table",
    "green_g",
    "green_matrix",
    "solve_grating",
    "scattered_field_grating",
    "total_field_grating",
    "wronskian",
]

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class ModeData:
    j: int
    lambda_j: float
    mu_j: complex
    propagating: bool


@dataclass(frozen=True)
class GratingProblem:
    """Grating scattering setup.

    Parameters
    ----------
    profile : GratingProfile
        Surface over one period (its ``period`` is ``L``).
    k : float
        Wavenumber.
    theta : float
        Incidence angle in ``(0, pi/2]``.
    b_depth : float
        Depth of the Dirichlet line ``y = -b`` in the Green's function.
    jmax : int
        Mode truncation ``|j| <= jmax``.
    """

    profile: GratingProfile
    k: float = 1.0
    theta: float = math.pi / 4
    b_depth: float = 1.2
    jmax: int = 120
    _modes: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("wavenumber must be positive")
        if not 0.0 < self.theta <= math.pi / 2 + 1e-15:
            raise ValueError("incidence angle must lie in (0, pi/2]")
        if not self.b_depth > 0:
            raise ValueError("b_depth must be positive")
        if self.jmax < 0:
            raise ValueError("jmax must be non-negative")
        lam, mu, prop = _modes(self.k, self.theta, self.period, self.jmax)
        object.__setattr__(self, "_modes", (lam, mu, prop))

    @property
    def period(self) -> float:
        return float(self.profile.period)

    @property
    def nu(self) -> complex:
        """Quasiperiodicity factor ``exp(i k L cos theta)``."""
        return cmath.exp(1j * self.k * self.period * math.cos(self.theta))

    @property
    def alpha(self) -> np.ndarray:
        return np.array([math.cos(self.theta), -math.sin(self.theta)])

    @property
    def lambdas(self) -> np.ndarray:
        return self._modes[0]

    @property
    def mus(self) -> np.ndarray:
        return self._modes[1]

    @property
    def propagating(self) -> np.ndarray:
        return self._modes[2]

    def incident(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.exp(1j * self.k * (x @ self.alpha))


def _modes(k: float, theta: float, period: float, jmax: int):
    j = np.arange(-jmax, jmax + 1)
    lam = k * math.cos(theta) + 2.0 * math.pi * j / period
    gap = k * k - lam * lam
    if np.any(np.abs(gap) < DEGENERACY_TOL):
        bad = j[np.abs(gap) < DEGENERACY_TOL]
        raise ValueError(f"degenerate grating modes (lambda_j^2 = k^2) for j = {bad.tolist()}")
    prop = gap > 0
    mu = np.where(prop, np.sqrt(np.abs(gap)) + 0j, 1j * np.sqrt(np.abs(gap)))
    return lam, mu, prop


def mode(g: GratingProblem, j: int) -> ModeData:
    """Mode data ``(lambda_j, mu_j)`` for ``|j| <= jmax``."""
    if abs(j) > g.jmax:
        raise ValueError(f"|j| must not exceed jmax = {g.jmax}")
    i = j + g.jmax
    return ModeData(int(j), float(g.lambdas[i]), complex(g.mus[i]), bool(g.propagating[i]))


def mode_table(g: GratingProblem, jlim: int | None = None) -> list[ModeData]:
    jlim = g.jmax if jlim is None else min(jlim, g.jmax)
    return [mode(g, j) for j in range(-jlim, jlim + 1)]


def wronskian(g: GratingProblem, j: int, t: float = 0.3) -> complex:
    """``W[v_j, psi_j] = v_j psi_j' - v_j' psi_j`` evaluated at height ``t``."""
    mu = mode(g, j).mu_j
    b = g.b_depth
    v = cmath.exp(1j * mu * t)
    dv = 1j * mu * v
    psi = cmath.exp(1j * mu * b) * cmath.sin(mu * (t + b)) / mu
    dpsi = cmath.exp(1j * mu * b) * cmath.cos(mu * (t + b))
    return v * dpsi - dv * psi


def green_g(g: GratingProblem, x, xi) -> np.ndarray | complex:
    """Quasiperiodic Green's function for broadcastable point arrays.

    Raises
    ------
    ValueError
        If a point pair coincides or a point lies below ``y = -b``.
    """
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    X, XI = np.broadcast_arrays(x, xi)
    if np.any(X[..., 1] < -g.b_depth) or np.any(XI[..., 1] < -g.b_depth):
        raise ValueError("points must lie above y = -b")
    if np.any(np.hypot(X[..., 0] - XI[..., 0], X[..., 1] - XI[..., 1]) < 1e-10):
        raise ValueError("x and xi coincide")
    vals = grating_green_sum(X[..., 0], X[..., 1], XI[..., 0], XI[..., 1], g.lambdas, g.mus, g.b_depth, g.period)
    shape = X.shape[:-1]
    return complex(vals[0]) if shape == () else vals.reshape(shape)


def green_matrix(g: GratingProblem, nodes, poles) -> np.ndarray:
    """``G[i, m] = g(nodes[i], poles[m])``."""
    nodes = np.asarray(nodes, dtype=float)
    poles = np.asarray(poles, dtype=float)
    return green_g(g, nodes[:, None, :], poles[None, :, :])


@dataclass
class GratingSolution:
    coefficients: np.ndarray
    poles: np.ndarray
    nodes: np.ndarray
    r_min: float
    solution: LsqSolution
    refined: bool = False

    @property
    def converged(self) -> bool:
        return self.solution.converged


def solve_grating(g: GratingProblem, N: int = 256, M: int = 64, w_min: float = 1e-8,
                  epsilon: float = 0.0, refine: bool = False) -> GratingSolution:
    """Fit ``v = sum_m c_m g(., xi_m)`` to ``-u_0`` on the profile nodes.

    Minimises ``||b + A c||`` with ``b_i = u_0(x_i)`` and
    ``||a||^2 = (1/N) sum |a_i|^2``.  When ``refine`` is set and the target
    ``epsilon`` is missed, one refinement round with doubled ``N`` and ``M``
    is run and returned if it lowers the residual.
    """
    if M >= N:
        raise ValueError("need fewer poles than nodes")
    nodes, poles = profile_nodes_and_poles(g.profile, N, M, depth=g.b_depth)
    A = green_matrix(g, nodes, poles)
    b = g.incident(nodes)
    sol = solve_spectral(SpectralLsqProblem(A, -b, w_min, epsilon))
    out = GratingSolution(sol.c, poles, nodes, sol.r_min, sol)
    if refine and not sol.converged:
        finer = solve_grating(g, 2 * N, 2 * M, w_min, epsilon, refine=False)
        logger.info("grating refinement: r %.3e -> %.3e", sol.r_min, finer.r_min)
        if finer.r_min < out.r_min:
            finer.refined = True
            return finer
    return out


def scattered_field_grating(c, poles, g: GratingProblem, x) -> np.ndarray | complex:
    """``v(x) = sum_m c_m g(x, xi_m)`` at points ``x`` (shape ``(..., 2)``)."""
    x = np.asarray(x, dtype=float)
    pts = x.reshape(-1, 2)
    G = green_matrix(g, pts, np.asarray(poles, dtype=float))
    v = G @ np.asarray(c, dtype=complex)
    return complex(v[0]) if x.ndim == 1 else v.reshape(x.shape[:-1])


def total_field_grating(c, poles, g: GratingProblem, x) -> np.ndarray | complex:
    """``u_0 + v``."""
    return g.incident(x) + scattered_field_grating(c, poles, g, x)
