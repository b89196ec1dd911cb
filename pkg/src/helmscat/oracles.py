"""Closed-form scattering by a circle.

For a circle of radius ``a`` centred at ``x0`` and incident wave
``exp(i k alpha . x)``, separation of variables gives the scattering amplitude

    A(alpha', alpha) = sqrt(2/(pi k)) e^{-i pi/4} e^{i k (alpha - alpha') . x0}
                       sum_l q_l e^{i l (theta - beta)}

with ``theta``, ``beta`` the polar angles of ``alpha'`` and ``alpha``.
Sound-soft: ``q_l = -J_l(ka) / H_l(ka)``.  Robin condition
``du/dn + h u = 0``: ``q_l = -(k J_l' + h J_l) / (k H_l' + h H_l)``.

:func:`robin_coefficient_fd` recomputes the Robin coefficient from a
finite-difference radial solve and is the independent check of the formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .specfun import bessel_j, bessel_j_derivative, hankel1, hankel1_derivative
from ._kernels import jy_table

__all__ = [
    "CircleScatterer",
    "series_coefficients",
    "circle_amplitude",
    "circle_amplitude_dirichlet",
    "circle_amplitude_robin",
    "circle_far_field_matrix",
    "exact_boundary_scattered_field",
    "robin_coefficient",
    "robin_coefficient_fd",
    "total_cross_section_series",
]

SERIES_TOL = 1e-14
SERIES_CAP = 60


@dataclass(frozen=True)
class CircleScatterer:
    """Circle with a sound-soft (``h=None``) or Robin (``h >= 0``) boundary."""

    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0
    h: float | None = None

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.h is not None and self.h < 0:
            raise ValueError("Robin parameter must be non-negative")

    @property
    def is_dirichlet(self) -> bool:
        return self.h is None


def _coefficients_upto(s: CircleScatterer, k: float, n: int) -> np.ndarray:
    """q_l for l = 0..n (q_{-l} = q_l for both conditions)."""
    ka = k * s.radius
    jt, yt = jy_table(n + 1, np.array([ka]))
    j = jt[:, 0]
    y = yt[:, 0]
    h = j + 1j * y
    ls = np.arange(n + 1)
    if s.is_dirichlet:
        return -j[: n + 1] / h[: n + 1]
    jm1 = np.concatenate([[-j[1]], j[:n]])
    hm1 = np.concatenate([[-h[1]], h[:n]])
    jp = jm1 - ls / ka * j[: n + 1]
    hp = hm1 - ls / ka * h[: n + 1]
    return -(k * jp + s.h * j[: n + 1]) / (k * hp + s.h * h[: n + 1])


def series_coefficients(s: CircleScatterer, k: float, tol: float = SERIES_TOL, cap: int = SERIES_CAP) -> np.ndarray:
    """Coefficients ``q_l`` for ``l = -n..n`` with the smallest adequate ``n``.

    The series is cut once the pair of terms ``|l| = n`` falls below ``tol``
    times the running sum magnitude ``sum |q_l|``.

    Raises
    ------
    ArithmeticError
        If the tolerance is not met by ``|l| = cap``.
    """
    q = _coefficients_upto(s, k, cap)
    running = np.cumsum(np.abs(q) * np.where(np.arange(cap + 1) == 0, 1.0, 2.0))
    ok = np.nonzero(np.abs(q)[1:] < tol * running[1:])[0]
    if ok.size == 0:
        raise ArithmeticError(f"amplitude series did not reach {tol:g} by |l| = {cap}")
    n = int(ok[0]) + 1
    return np.concatenate([q[n:0:-1], q[: n + 1]])


def _polar(v) -> tuple[np.ndarray, float]:
    v = np.asarray(v, dtype=float)
    return v, math.atan2(v[1], v[0])


def circle_amplitude(s: CircleScatterer, k: float, alpha_prime, alpha) -> complex:
    """Scattering amplitude ``A(alpha', alpha)`` for either boundary condition."""
    ap, theta = _polar(alpha_prime)
    al, beta = _polar(alpha)
    q = series_coefficients(s, k)
    n = (q.size - 1) // 2
    ls = np.arange(-n, n + 1)
    pref = math.sqrt(2.0 / (math.pi * k)) * np.exp(-0.25j * math.pi)
    shift = np.exp(1j * k * (al - ap) @ np.asarray(s.center, dtype=float))
    return complex(pref * shift * np.sum(q * np.exp(1j * ls * (theta - beta))))


def circle_amplitude_dirichlet(s: CircleScatterer, k: float, alpha_prime, alpha) -> complex:
    """Sound-soft circle amplitude."""
    if not s.is_dirichlet:
        raise ValueError("scatterer has a Robin condition")
    return circle_amplitude(s, k, alpha_prime, alpha)


def circle_amplitude_robin(s: CircleScatterer, k: float, alpha_prime, alpha) -> complex:
    """Robin circle amplitude for ``du/dn + h u = 0``."""
    if s.is_dirichlet:
        raise ValueError("scatterer has no Robin parameter")
    return circle_amplitude(s, k, alpha_prime, alpha)


def circle_far_field_matrix(s: CircleScatterer, k: float, theta_out, beta_in) -> np.ndarray:
    """``F[i, j] = A(theta_out[i], beta_in[j])`` for arrays of polar angles."""
    th = np.asarray(theta_out, dtype=float)
    be = np.asarray(beta_in, dtype=float)
    q = series_coefficients(s, k)
    n = (q.size - 1) // 2
    ls = np.arange(-n, n + 1)
    x0 = np.asarray(s.center, dtype=float)
    ap = np.column_stack([np.cos(th), np.sin(th)])
    al = np.column_stack([np.cos(be), np.sin(be)])
    phase = np.exp(1j * k * ((al @ x0)[None, :] - (ap @ x0)[:, None]))
    diff = th[:, None] - be[None, :]
    series = np.exp(1j * diff[..., None] * ls) @ q
    return math.sqrt(2.0 / (math.pi * k)) * np.exp(-0.25j * math.pi) * phase * series


def exact_boundary_scattered_field(s: CircleScatterer, k: float, alpha, theta) -> np.ndarray | complex:
    """Scattered field on a sound-soft circle, ``-exp(i k x . alpha)``."""
    th = np.asarray(theta, dtype=float)
    x0 = np.asarray(s.center, dtype=float)
    al = np.asarray(alpha, dtype=float)
    x = x0[0] + s.radius * np.cos(th)
    y = x0[1] + s.radius * np.sin(th)
    v = -np.exp(1j * k * (x * al[0] + y * al[1]))
    return complex(v) if np.ndim(v) == 0 else v


def robin_coefficient(l: int, ka: float, k: float, h: float) -> complex:
    """``-(k J_l' + h J_l) / (k H_l' + h H_l)`` at argument ``ka``."""
    return -(k * bessel_j_derivative(l, ka) + h * bessel_j(l, ka)) / (
        k * hankel1_derivative(l, ka) + h * hankel1(l, ka)
    )


def robin_coefficient_fd(l: int, k: float, a: float, h: float, outer: float | None = None,
                         n: int = 20000) -> complex:
    """Robin coefficient from a second-order finite-difference radial solve.

    Solves ``w'' + w'/r + (k^2 - l^2/r^2) w = 0`` for the scattered radial
    profile on ``[a, R]`` with ``w' + h w = -(k J_l'(ka) + h J_l(ka))`` at
    ``r = a`` and the outgoing condition ``w'(R) = k H_l'(kR)/H_l(kR) w(R)``.
    The coefficient is ``w(a) / H_l(ka)``.  Boundary derivatives use
    second-order one-sided stencils, so the error is ``O(((R - a)/n)^2)``.
    """
    R = 3.0 * a if outer is None else float(outer)
    r = np.linspace(a, R, n + 1)
    dr = r[1] - r[0]
    ka = k * a
    g_in = -(k * complex(bessel_j_derivative(l, ka)) + h * float(bessel_j(l, ka)))
    dtn = k * complex(hankel1_derivative(l, k * R)) / complex(hankel1(l, k * R))

    # banded storage with two super- and two sub-diagonals (one-sided ends)
    ab = np.zeros((5, n + 1), dtype=complex)
    rhs = np.zeros(n + 1, dtype=complex)

    def put(i, j, v):
        ab[2 + i - j, j] += v

    ri = r[1:-1]
    lower = 1.0 / dr**2 - 1.0 / (2 * dr * ri)
    diag = -2.0 / dr**2 + k**2 - l**2 / ri**2
    upper = 1.0 / dr**2 + 1.0 / (2 * dr * ri)
    ab[1, 2 : n + 1] = upper
    ab[2, 1:n] = diag
    ab[3, 0 : n - 1] = lower
    # w'(a) ~ (-3 w0 + 4 w1 - w2)/(2 dr)
    put(0, 0, -3.0 / (2 * dr) + h)
    put(0, 1, 4.0 / (2 * dr))
    put(0, 2, -1.0 / (2 * dr))
    rhs[0] = g_in
    # w'(R) ~ (3 wn - 4 w_{n-1} + w_{n-2})/(2 dr)
    put(n, n, 3.0 / (2 * dr) - dtn)
    put(n, n - 1, -4.0 / (2 * dr))
    put(n, n - 2, 1.0 / (2 * dr))
    w = solve_banded((2, 2), ab, rhs)
    return complex(w[0] / complex(hankel1(l, ka)))


def total_cross_section_series(s: CircleScatterer, k: float) -> float:
    """``int_0^{2pi} |A|^2 dtheta`` from the series: ``(4/k) sum |q_l|^2``."""
    q = series_coefficients(s, k)
    return float(4.0 / k * np.sum(np.abs(q) ** 2))
