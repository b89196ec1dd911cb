"""Complex least squares by SVD with a spectral cutoff and rank growth.

Given ``A = U W V^H`` the solver keeps the set ``Sigma = {n : w_n >= w_min}``
and grows a retained set ``P`` one singular value at a time, largest first.
After each addition it evaluates the normalised residual

    r_p^2 = (1/M) (||b||^2 - sum_{n in P} |<u_n, b>|^2)

and stops as soon as ``r_p <= epsilon``.  The minimiser is
``c = sum_{n in P} <u_n, b> / w_n v_n`` with ``<u, b> = u^H b``.

The residual is accumulated from the discarded part of ``b`` (its component
outside ``range(U)`` plus the unretained coefficients), which avoids the
cancellation of the textbook difference formula when ``r`` is tiny.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

__all__ = ["SpectralLsqProblem", "LsqSolution", "SVDResult", "svd", "solve_spectral", "normalized_norm"]


@dataclass(frozen=True)
class SVDResult:
    """Thin SVD ``A = U diag(w) V^H`` with a fixed phase convention."""

    U: np.ndarray
    w: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.w) @ self.V.conj().T


@dataclass(frozen=True)
class SpectralLsqProblem:
    A: np.ndarray
    b: np.ndarray
    w_min: float = 1e-8
    epsilon: float = 0.0

    def __post_init__(self):
        A = np.asarray(self.A)
        b = np.asarray(self.b)
        if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
            raise ValueError(f"A must be a non-empty matrix, got shape {A.shape}")
        if b.shape != (A.shape[0],):
            raise ValueError(f"b must have shape ({A.shape[0]},), got {b.shape}")
        if self.w_min < 0 or self.epsilon < 0:
            raise ValueError("w_min and epsilon must be non-negative")


@dataclass
class LsqSolution:
    """Result of :func:`solve_spectral`.

    Attributes
    ----------
    c : ndarray
        Coefficient vector.
    r_min : float
        Normalised residual ``||A c - b|| / sqrt(M)`` at the final rank.
    rank_used : int
        Number of singular values in the retained set.
    converged : bool
        True if ``r_min <= epsilon`` was reached before exhausting ``Sigma``.
    residual_history : ndarray
        ``r_p`` for p = 0..rank_used.
    singular_values : ndarray
        All singular values, descending.
    """

    c: np.ndarray
    r_min: float
    rank_used: int
    converged: bool
    residual_history: np.ndarray = field(repr=False)
    singular_values: np.ndarray = field(repr=False)

    @property
    def cutoff_rank(self) -> int:
        return int(self.residual_history.size - 1)


def normalized_norm(x) -> float:
    """``sqrt((1/M) sum |x_i|^2)``, the norm used for all residuals."""
    x = np.asarray(x)
    return float(np.linalg.norm(x) / np.sqrt(x.size))


PIVOT_RTOL = 1e-12


def svd(A) -> SVDResult:
    """Thin SVD with a fixed phase for every right singular vector.

    The pivot of a column is its first entry whose modulus is within a
    relative ``1e-12`` of the column maximum; it is made real positive.

    Raises
    ------
    numpy.linalg.LinAlgError
        If the underlying LAPACK routine does not converge.
    """
    A = np.asarray(A)
    if not np.all(np.isfinite(A)):
        raise np.linalg.LinAlgError("matrix has non-finite entries")
    U, w, Vh = np.linalg.svd(A.astype(complex, copy=False), full_matrices=False)
    V = Vh.conj().T
    mag = np.abs(V)
    idx = np.argmax(mag >= (1 - PIVOT_RTOL) * mag.max(axis=0), axis=0)
    pivot = V[idx, np.arange(V.shape[1])]
    phase = np.where(np.abs(pivot) > 0, pivot / np.where(pivot == 0, 1, np.abs(pivot)), 1.0)
    V = V / phase
    U = U / phase
    return SVDResult(U, w, V)


def solve_spectral(p: SpectralLsqProblem | np.ndarray, b=None, *, w_min: float = 1e-8,
                   epsilon: float = 0.0, decomposition: SVDResult | None = None) -> LsqSolution:
    """Minimise ``||A c - b||`` by iterative spectral rank growth.

    Accepts either a :class:`SpectralLsqProblem` or ``(A, b)`` with keyword
    knobs.  A precomputed ``decomposition`` of ``A`` may be passed to reuse
    one SVD for many right-hand sides.
    """
    if not isinstance(p, SpectralLsqProblem):
        p = SpectralLsqProblem(np.asarray(p), np.asarray(b), w_min, epsilon)
    A = np.asarray(p.A)
    bv = np.asarray(p.b, dtype=complex)
    M = A.shape[0]
    dec = decomposition if decomposition is not None else svd(A)
    w = dec.w
    beta = dec.U.conj().T @ bv
    sigma = int(np.count_nonzero(w >= p.w_min))

    b_perp = bv - dec.U @ beta
    tail = np.abs(beta) ** 2
    # r_p^2 M = ||b_perp||^2 + sum_{n >= p} |beta_n|^2  (suffix sums, no cancellation)
    suffix = np.concatenate([np.cumsum(tail[::-1])[::-1], [0.0]])
    r2 = (np.vdot(b_perp, b_perp).real + suffix[: sigma + 1]) / M
    history = np.sqrt(np.maximum(r2, 0.0))

    hit = np.nonzero(history <= p.epsilon)[0]
    if hit.size:
        rank = int(hit[0])
        converged = True
    else:
        rank = sigma
        converged = False
    coef = beta[:rank] / w[:rank]
    c = dec.V[:, :rank] @ coef
    if not converged:
        logger.debug("spectral solve exhausted Sigma at rank %d, r=%.3e", rank, history[rank])
    return LsqSolution(
        c=c,
        r_min=float(history[rank]),
        rank_used=rank,
        converged=converged,
        residual_history=history[: rank + 1],
        singular_values=w,
    )
