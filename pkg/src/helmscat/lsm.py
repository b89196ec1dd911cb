"""Linear Sampling Method indicators.

For a far-field matrix ``F[i, j] = A(alpha_i, beta_j)`` on ``N`` uniform
directions and a sampling point ``z`` the right-hand side is

    f_n(z) = e^{i pi/4} / sqrt(8 pi k) exp(-i k alpha_n . z),

the far field of a point source at ``z``.  With ``F = U diag(s) V^H``:

* Colton-Kirsch:  ``||zeta||^2 = sum |rho_n|^2 / s_n^2``, ``rho = U^H f``;
* Kirsch (F*F)^{1/4}:  ``||zeta||^2 = sum |mu_n|^2 / s_n``, ``mu = V^H f``.

Theory predicts ``||zeta||`` blows up outside the obstacle.  On noise-free
synthetic data in the resonance region the *minimum* of ``||zeta||`` is the
reliable locator, so :func:`scan` reports both fields and
:meth:`LsmScan.argmin` is the identification heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import polar_directions
from .lstsq import SVDResult, svd

__all__ = [
    "FarFieldMatrix",
    "LsmScan",
    "build_rhs",
    "zeta_norm_ck",
    "zeta_norm_kirsch",
    "scan",
    "square_grid",
]

DEFAULT_CUTOFF = 1e-12


@dataclass
class FarFieldMatrix:
    """Square far-field matrix on uniform directions ``2 pi n / N``."""

    F: np.ndarray
    k: float
    _svd: SVDResult | None = None

    def __post_init__(self):
        self.F = np.asarray(self.F, dtype=complex)
        if self.F.ndim != 2 or self.F.shape[0] != self.F.shape[1]:
            raise ValueError("far-field matrix must be square")

    @property
    def N(self) -> int:
        return self.F.shape[0]

    @property
    def angles(self) -> np.ndarray:
        return 2 * math.pi * np.arange(self.N) / self.N

    @property
    def directions(self) -> np.ndarray:
        return polar_directions(self.angles)

    @property
    def decomposition(self) -> SVDResult:
        if self._svd is None:
            self._svd = svd(self.F)
        return self._svd


@dataclass
class LsmScan:
    """``log10 ||zeta||`` for both variants on a rectangular grid."""

    x: np.ndarray
    y: np.ndarray
    log_ck: np.ndarray
    log_k: np.ndarray
    retained: int

    def argmin(self, variant: str = "ck") -> np.ndarray:
        field = self.log_ck if variant == "ck" else self.log_k
        iy, ix = np.unravel_index(np.argmin(field), field.shape)
        return np.array([self.x[ix], self.y[iy]])

    def rows(self):
        """``(x, y, log_ck, log_k)`` per grid point, y-major."""
        X, Y = np.meshgrid(self.x, self.y)
        return np.column_stack([X.ravel(), Y.ravel(), self.log_ck.ravel(), self.log_k.ravel()])


def build_rhs(z, directions, k: float) -> np.ndarray:
    """``f_n = e^{i pi/4}/sqrt(8 pi k) exp(-i k alpha_n . z)``; ``z`` may be ``(..., 2)``.

    Returns shape ``(N,) + z.shape[:-1]``.
    """
    z = np.asarray(z, dtype=float)
    d = np.asarray(directions, dtype=float)
    phase = np.tensordot(d, z, axes=([1], [-1]))
    return np.exp(0.25j * math.pi) / math.sqrt(8 * math.pi * k) * np.exp(-1j * k * phase)


def _retained(w: np.ndarray, cutoff: float) -> np.ndarray:
    keep = w >= cutoff * w[0] if w.size and w[0] > 0 else np.zeros(w.shape, dtype=bool)
    if not keep.any():
        raise ValueError("no singular value survives the cutoff")
    return keep


def zeta_norm_ck(m: FarFieldMatrix, f, cutoff: float = DEFAULT_CUTOFF) -> np.ndarray | float:
    """Colton-Kirsch indicator ``||zeta||`` (not squared)."""
    dec = m.decomposition
    keep = _retained(dec.w, cutoff)
    rho = dec.U[:, keep].conj().T @ np.asarray(f, dtype=complex)
    w = dec.w[keep].reshape((-1,) + (1,) * (rho.ndim - 1))
    val = np.sqrt(np.sum(np.abs(rho) ** 2 / w**2, axis=0))
    return float(val) if np.ndim(val) == 0 else val


def zeta_norm_kirsch(m: FarFieldMatrix, f, cutoff: float = DEFAULT_CUTOFF) -> np.ndarray | float:
    """Kirsch (F*F)^{1/4} indicator ``||zeta||`` (not squared)."""
    dec = m.decomposition
    keep = _retained(dec.w, cutoff)
    mu = dec.V[:, keep].conj().T @ np.asarray(f, dtype=complex)
    w = dec.w[keep].reshape((-1,) + (1,) * (mu.ndim - 1))
    val = np.sqrt(np.sum(np.abs(mu) ** 2 / w, axis=0))
    return float(val) if np.ndim(val) == 0 else val


def square_grid(center, side: float = 12.0, n: int = 61) -> tuple[np.ndarray, np.ndarray]:
    c = np.asarray(center, dtype=float)
    g = np.linspace(-side / 2, side / 2, n)
    return c[0] + g, c[1] + g


def scan(m: FarFieldMatrix, x, y, cutoff: float = DEFAULT_CUTOFF) -> LsmScan:
    """Evaluate both indicators on the grid ``x by y`` (one SVD, many points)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    X, Y = np.meshgrid(x, y)
    Z = np.stack([X, Y], axis=-1)
    f = build_rhs(Z.reshape(-1, 2), m.directions, m.k)
    ck = zeta_norm_ck(m, f, cutoff).reshape(X.shape)
    kk = zeta_norm_kirsch(m, f, cutoff).reshape(X.shape)
    keep = _retained(m.decomposition.w, cutoff)
    return LsmScan(x, y, np.log10(ck), np.log10(kk), int(keep.sum()))
