"""Support Function Method: obstacle localisation from far-field phases.

For a smooth convex sound-soft obstacle the Kirchhoff approximation and the
stationary-phase method give, for ``alpha != alpha'``,

    A(alpha', alpha) ~ -(1/2) sqrt(|alpha - alpha'| / kappa) exp(i k |alpha - alpha'| d(l)),
    l = (alpha - alpha') / |alpha - alpha'|,

where ``d(l) = min_{x in D} x . l`` is the support function and ``kappa``
the curvature at the specular point.  Only the phase is used:
``d(l)`` minimises

    Psi(t) = sum_pairs |A / |A| + exp(i k |alpha - alpha'| t)|^2.

For a Robin boundary the phase acquires an offset, ``arg A ~ C1 t + C2``
with ``t = |alpha - alpha'|``; a linear fit gives ``d = C1 / k``.

From ``p(t) = d(l(t))`` on a uniform grid the boundary follows from

    x1 = p cos t - p' sin t,   x2 = p sin t + p' cos t,

and the convex hull is the intersection of the half-planes ``x . l >= d``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .geometry import polar_directions

logger = logging.getLogger(__name__)

__all__ = [
    "AmplitudePairSet",
    "SupportSamples",
    "approx_amplitude",
    "pair_grid",
    "robin_pair_grid",
    "make_pair_set",
    "psi_objective",
    "recover_support_dirichlet",
    "recover_support_robin",
    "recover_support_samples",
    "reconstruct_boundary",
    "localize_halfplanes",
]

APERTURE = math.pi / 4
SEARCH_RADIUS = 20.0


@dataclass(frozen=True)
class AmplitudePairSet:
    """Amplitudes ``A(alpha'_i, alpha_i)`` for pairs sharing ``l``."""

    l: np.ndarray
    alpha: np.ndarray
    alpha_prime: np.ndarray
    A: np.ndarray
    k: float

    def __post_init__(self):
        l = np.asarray(self.l, dtype=float)
        al = np.atleast_2d(np.asarray(self.alpha, dtype=float))
        ap = np.atleast_2d(np.asarray(self.alpha_prime, dtype=float))
        A = np.asarray(self.A, dtype=complex).ravel()
        if not (al.shape == ap.shape and al.shape[0] == A.size):
            raise ValueError("alpha, alpha_prime and A must have matching lengths")
        diff = al - ap
        norm = np.linalg.norm(diff, axis=1)
        if np.any(norm < 1e-12):
            raise ValueError("pairs with alpha = alpha' carry no support information")
        if np.any(np.abs(diff @ l - norm) > 1e-12):
            raise ValueError("every pair must satisfy (alpha - alpha') / |alpha - alpha'| = l")
        if np.any(np.abs(al @ l) <= 1.0 / math.sqrt(2.0) - 1e-12):
            raise ValueError("alpha outside the aperture |alpha . l| > 1/sqrt(2)")
        for name, val in (("l", l), ("alpha", al), ("alpha_prime", ap), ("A", A)):
            object.__setattr__(self, name, val)

    @property
    def t(self) -> np.ndarray:
        """``|alpha - alpha'|`` per pair."""
        return np.linalg.norm(self.alpha - self.alpha_prime, axis=1)

    def __len__(self) -> int:
        return self.A.size


@dataclass(frozen=True)
class SupportSamples:
    """Support values ``p(t_i) = d(l(t_i))`` on a uniform grid of ``[0, 2 pi)``."""

    t: np.ndarray
    d: np.ndarray
    k: float = float("nan")

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        d = np.asarray(self.d, dtype=float)
        if t.shape != d.shape or t.ndim != 1:
            raise ValueError("t and d must be matching 1-D arrays")
        if t.size > 1:
            step = 2 * math.pi / t.size
            if np.max(np.abs(np.diff(t) - step)) > 1e-9:
                raise ValueError("support samples must lie on a uniform grid of [0, 2 pi)")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "d", d)

    @classmethod
    def uniform(cls, d, k: float = float("nan"), offset: float = 0.0) -> "SupportSamples":
        d = np.asarray(d, dtype=float)
        return cls(offset + 2 * math.pi * np.arange(d.size) / d.size, d, k)

    @property
    def directions(self) -> np.ndarray:
        return polar_directions(self.t)


def approx_amplitude(d: float, kappa: float, alpha, alpha_prime, k: float) -> complex:
    """High-frequency amplitude ``-(1/2) sqrt(t/kappa) exp(i k t d)``, ``t = |alpha - alpha'|``."""
    t = float(np.linalg.norm(np.asarray(alpha, dtype=float) - np.asarray(alpha_prime, dtype=float)))
    return complex(-0.5 * math.sqrt(t / kappa) * np.exp(1j * k * t * d))


def pair_grid(l, n_pairs: int, aperture: float = APERTURE) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric pairs about ``l``.

    ``alpha = polar(phi + beta_i)`` and ``alpha' = polar(phi + pi - beta_i)``
    with ``beta_i`` the midpoints of ``n_pairs`` equal cells of
    ``(-aperture, aperture)``, so ``alpha - alpha' = 2 cos(beta_i) l``.
    """
    if n_pairs < 2:
        raise ValueError("need at least two pairs")
    phi = math.atan2(l[1], l[0])
    beta = -aperture + (np.arange(n_pairs) + 0.5) * (2 * aperture / n_pairs)
    return polar_directions(phi + beta), polar_directions(phi + math.pi - beta)


def robin_pair_grid(l, n_pairs: int = 32, aperture: float = APERTURE) -> tuple[np.ndarray, np.ndarray]:
    """One-sided pairs ``beta_i = i aperture / n``, i = 0..n-1, ordered by increasing ``t``.

    ``t = 2 cos beta`` then covers ``(sqrt 2, 2]`` for the default aperture.
    """
    if n_pairs < 5:
        raise ValueError("need at least five pairs")
    phi = math.atan2(l[1], l[0])
    beta = (np.arange(n_pairs) * aperture / n_pairs)[::-1]
    return polar_directions(phi + beta), polar_directions(phi + math.pi - beta)


def make_pair_set(l, amplitude: Callable, k: float, n_pairs: int = 12, robin: bool = False,
                  aperture: float = APERTURE) -> AmplitudePairSet:
    """Build a pair set by calling ``amplitude(alpha_prime, alpha)`` per pair."""
    l = np.asarray(l, dtype=float)
    grid = robin_pair_grid if robin else pair_grid
    al, ap = grid(l, n_pairs, aperture)
    A = np.array([amplitude(ap[i], al[i]) for i in range(al.shape[0])], dtype=complex)
    return AmplitudePairSet(l, al, ap, A, k)


def psi_objective(s: AmplitudePairSet) -> Callable[[np.ndarray], np.ndarray]:
    """``Psi(t) = sum |A/|A| + exp(i k |alpha - alpha'| t)|^2`` (vectorised in ``t``)."""
    mag = np.abs(s.A)
    if np.all(mag == 0):
        raise ValueError("all amplitudes vanish; no phase information")
    keep = mag > 0
    unit = s.A[keep] / mag[keep]
    w = s.k * s.t[keep]

    def psi(t):
        t = np.asarray(t, dtype=float)
        return np.sum(np.abs(unit + np.exp(1j * np.multiply.outer(t, w))) ** 2, axis=-1)

    return psi


def recover_support_dirichlet(s: AmplitudePairSet, radius: float = SEARCH_RADIUS, tol: float = 1e-6) -> float:
    """Minimiser of ``Psi`` on ``[-radius, radius]``.

    A uniform scan with step at most ``pi / (200 k)`` brackets the global
    minimum, which is then polished by bounded Brent search.
    """
    if len(s) < 3:
        raise ValueError("need at least three pairs")
    psi = psi_objective(s)
    step = math.pi / (200.0 * s.k)
    n = int(math.ceil(2 * radius / step)) + 1
    grid = np.linspace(-radius, radius, n)
    vals = np.concatenate([psi(chunk) for chunk in np.array_split(grid, max(1, n // 4096))])
    i = int(np.argmin(vals))
    h = grid[1] - grid[0]
    lo, hi = max(-radius, grid[i] - h), min(radius, grid[i] + h)
    res = minimize_scalar(lambda x: float(psi(x)), bounds=(lo, hi), method="bounded",
                          options={"xatol": tol})
    return float(res.x) if res.fun <= vals[i] else float(grid[i])


def recover_support_robin(s: AmplitudePairSet) -> tuple[float, float]:
    """Support value from a linear fit of the unwrapped phase against ``t``.

    Returns ``(d, h_estimate)`` with ``d = C1 / k`` and
    ``h = -k tan(C2 / 2)``; the impedance estimate is rough by nature.

    Raises
    ------
    ValueError
        If consecutive phases differ by more than ``pi/2`` (grid too coarse).
    """
    if len(s) < 5:
        raise ValueError("need at least five pairs")
    t = s.t
    order = np.argsort(t)
    t = t[order]
    phase = np.angle(s.A[order])
    jumps = np.angle(np.exp(1j * np.diff(phase)))
    if np.any(np.abs(jumps) > math.pi / 2):
        raise ValueError("phase jumps exceed pi/2 between neighbouring pairs; refine the pair grid")
    unwrapped = phase[0] + np.concatenate([[0.0], np.cumsum(jumps)])
    c1, c2 = np.polyfit(t, unwrapped, 1)
    return float(c1 / s.k), float(-s.k * math.tan(0.5 * c2))


def recover_support_samples(amplitude: Callable, k: float, n_dirs: int, n_pairs: int = 12,
                            offset: float = 0.0, robin: bool = False,
                            aperture: float = APERTURE) -> SupportSamples:
    """Run the recovery for ``n_dirs`` uniform directions ``l``."""
    t = offset + 2 * math.pi * np.arange(n_dirs) / n_dirs
    d = np.empty(n_dirs)
    for i, ti in enumerate(t):
        s = make_pair_set((math.cos(ti), math.sin(ti)), amplitude, k, n_pairs, robin, aperture)
        d[i] = recover_support_robin(s)[0] if robin else recover_support_dirichlet(s)
    return SupportSamples(t, d, k)


def reconstruct_boundary(s: SupportSamples) -> np.ndarray:
    """Boundary points from support samples; shape ``(n, 2)``.

    ``p'`` is the second-order central difference on the periodic grid.
    """
    n = s.d.size
    if n < 8:
        raise ValueError("need at least eight support samples")
    h = 2 * math.pi / n
    dp = (np.roll(s.d, -1) - np.roll(s.d, 1)) / (2 * h)
    c, sn = np.cos(s.t), np.sin(s.t)
    return np.column_stack([s.d * c - dp * sn, s.d * sn + dp * c])


def localize_halfplanes(s: SupportSamples, x, y) -> np.ndarray:
    """Boolean mask on the grid ``x (nx,) by y (ny,)`` of points with ``x . l_i >= d_i``.

    The mask has shape ``(ny, nx)``.  A ``RuntimeWarning`` is issued when
    no grid point qualifies.
    """
    X, Y = np.meshgrid(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    mask = np.ones(X.shape, dtype=bool)
    for (lx, ly), di in zip(s.directions, s.d):
        mask &= X * lx + Y * ly >= di
    if not mask.any():
        warnings.warn("half-plane intersection contains no grid point", RuntimeWarning, stacklevel=2)
    return mask
