"""Sampled far-field data: synthesis, lookup and CSV round-trip.

A :class:`FarField` holds ``A(theta_j, beta_i)`` for incident angles
``beta`` and observation angles ``theta``.  On disk it is a CSV with a
commented header and one row per ``(beta, theta)`` pair, beta-major::

    # helmscat far field
    # k = 1.0
    # n_in = 120
    # n_out = 120
    # convention = A(theta, beta); incident exp(i k x.(cos beta, sin beta))
    beta,theta,re,im
    0.0,0.0,...,...

Floats are written with ``repr`` so the round trip is lossless.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import biem, mrc
from .geometry import Boundary, Circle, interior_poles, polar_directions
from .lstsq import svd, solve_spectral, SpectralLsqProblem
from .oracles import CircleScatterer, circle_far_field_matrix
from .sfm import APERTURE, AmplitudePairSet

__all__ = [
    "FarField",
    "uniform_angles",
    "synthesize_far_field",
    "write_far_field",
    "read_far_field",
    "grid_pair_set",
]

ANGLE_TOL = 1e-9
TWO_PI = 2 * math.pi


def uniform_angles(n: int) -> np.ndarray:
    return TWO_PI * np.arange(n) / n


@dataclass
class FarField:
    """``values[i, j] = A(theta[j], beta[i])``."""

    k: float
    beta: np.ndarray
    theta: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.beta = np.asarray(self.beta, dtype=float)
        self.theta = np.asarray(self.theta, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.beta.size, self.theta.size):
            raise ValueError("values must have shape (n_in, n_out)")

    @property
    def n_in(self) -> int:
        return self.beta.size

    @property
    def n_out(self) -> int:
        return self.theta.size

    def matrix(self) -> np.ndarray:
        """Square ``F[i, j] = A(alpha_i, beta_j)`` (needs identical grids)."""
        if self.n_in != self.n_out or np.max(np.abs(self.beta - self.theta)) > ANGLE_TOL:
            raise ValueError("incident and observation grids differ")
        return self.values.T.copy()

    @staticmethod
    def _index(grid: np.ndarray, angle: float) -> int:
        gap = np.abs(np.angle(np.exp(1j * (grid - angle))))
        i = int(np.argmin(gap))
        if gap[i] > ANGLE_TOL:
            raise KeyError(f"angle {angle!r} is not on the sampled grid")
        return i

    def amplitude(self, alpha_prime, alpha) -> complex:
        """``A(alpha', alpha)`` for directions on the sampled grids."""
        th = math.atan2(alpha_prime[1], alpha_prime[0])
        be = math.atan2(alpha[1], alpha[0])
        return complex(self.values[self._index(self.beta, be), self._index(self.theta, th)])


def _mrc_defaults(b: Boundary) -> tuple[int, float]:
    return {"ellipse": (4, 0.7), "kite": (16, 0.9), "triangle": (16, 0.9), "circle": (1, 0.0)}.get(b.kind, (16, 0.9))


def synthesize_far_field(shape, k: float, n_in: int, n_out: int, engine: str = "analytic",
                         h: float | None = None, *, n: int = 64, L: int = 5, J: int | None = None,
                         scale: float | None = None, M: int = 720, w_min: float = 1e-8) -> FarField:
    """Far-field data on uniform incident and observation grids.

    Parameters
    ----------
    shape : Boundary or CircleScatterer
        Obstacle.  The analytic engine needs a circle.
    engine : {"analytic", "biem", "mrc"}
        Closed-form series, Nystrom BIEM, or MRC expansion.
    h : float, optional
        Robin parameter (analytic engine only); ``None`` means sound-soft.

    Raises
    ------
    ValueError
        For an unsupported (shape, condition, engine) combination.
    """
    beta = uniform_angles(n_in)
    theta = uniform_angles(n_out)
    if engine == "analytic":
        if isinstance(shape, CircleScatterer):
            scat = shape if h is None else CircleScatterer(shape.center, shape.radius, h)
        elif isinstance(shape, Circle):
            scat = CircleScatterer(tuple(shape.center), shape.radius, h)
        else:
            raise ValueError("the analytic engine supports circles only")
        return FarField(k, beta, theta, circle_far_field_matrix(scat, k, theta, beta).T)
    if h is not None:
        raise ValueError(f"the {engine} engine supports sound-soft obstacles only")
    if isinstance(shape, CircleScatterer):
        shape = Circle(tuple(shape.center), shape.radius)
    if engine == "biem":
        dens = biem.solve_dirichlet_many(shape, k, polar_directions(beta), n=n)
        out = polar_directions(theta)
        return FarField(k, beta, theta, np.array([biem.far_field_biem(d, out) for d in dens]))
    if engine == "mrc":
        J0, s0 = _mrc_defaults(shape)
        J = J0 if J is None else J
        scale = s0 if scale is None else scale
        if shape.kind == "circle" and J == 1:
            poles = shape.ref_point()[None, :]
        else:
            poles = interior_poles(shape, J, scale)
        knots = uniform_angles(M)
        pts = shape.point(knots)
        A = mrc.basis_matrix(pts, poles, L, k)
        dec = svd(A)
        B = mrc.far_field_basis(polar_directions(theta), poles, L, k)
        vals = np.empty((n_in, n_out), dtype=complex)
        for i, d in enumerate(polar_directions(beta)):
            rhs = -np.exp(1j * k * (pts @ d))
            sol = solve_spectral(SpectralLsqProblem(A, rhs, w_min, 0.0), decomposition=dec)
            vals[i] = B @ sol.c
        return FarField(k, beta, theta, vals)
    raise ValueError(f"unknown engine {engine!r}")


def write_far_field(ff: FarField, path) -> None:
    """Write a far-field CSV (deterministic, lossless)."""
    buf = io.StringIO()
    buf.write("# helmscat far field\n")
    buf.write(f"# k = {ff.k!r}\n# n_in = {ff.n_in}\n# n_out = {ff.n_out}\n")
    buf.write("# convention = A(theta, beta); incident exp(i k x.(cos beta, sin beta))\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["beta", "theta", "re", "im"])
    for i, be in enumerate(ff.beta):
        for j, th in enumerate(ff.theta):
            a = ff.values[i, j]
            w.writerow([repr(float(be)), repr(float(th)), repr(float(a.real)), repr(float(a.imag))])
    Path(path).write_text(buf.getvalue())


def read_far_field(path) -> FarField:
    """Read a far-field CSV written by :func:`write_far_field`."""
    header: dict[str, str] = {}
    rows = []
    with open(path, newline="") as fh:
        body = []
        for line in fh:
            if line.startswith("#"):
                key, sep, val = line[1:].partition("=")
                if sep:
                    header[key.strip()] = val.strip()
            else:
                body.append(line)
    reader = csv.reader(body)
    cols = next(reader)
    if cols != ["beta", "theta", "re", "im"]:
        raise ValueError(f"unexpected far-field columns {cols}")
    for r in reader:
        if r:
            rows.append([float(v) for v in r])
    try:
        k = float(header["k"])
        n_in = int(header["n_in"])
        n_out = int(header["n_out"])
    except KeyError as exc:
        raise ValueError(f"far-field header lacks {exc}") from None
    arr = np.asarray(rows, dtype=float)
    if arr.shape != (n_in * n_out, 4):
        raise ValueError(f"expected {n_in * n_out} rows, found {arr.shape[0]}")
    beta = arr[::n_out, 0]
    theta = arr[:n_out, 1]
    values = (arr[:, 2] + 1j * arr[:, 3]).reshape(n_in, n_out)
    return FarField(k, beta, theta, values)


def grid_pair_set(ff: FarField, l_angle: float, aperture: float = APERTURE,
                  one_sided: bool = False) -> AmplitudePairSet:
    """Pairs available in sampled data for the direction ``l = polar(l_angle)``.

    Every incident angle ``alpha`` with ``|alpha . l| > cos(aperture)`` is paired with
    its reflection ``alpha' = 2 l_angle + pi - alpha``, which must lie on the
    observation grid.  With ``one_sided`` only ``alpha`` on one side of ``l``
    (offset in ``[0, aperture)``) is kept, which gives distinct ``t`` values.
    """
    l = np.array([math.cos(l_angle), math.sin(l_angle)])
    off = np.angle(np.exp(1j * (ff.beta - l_angle)))
    ok = np.abs(off) < aperture - 1e-12
    if one_sided:
        ok &= off > -1e-12
    ok &= np.abs(np.abs(off) - math.pi / 2) > 1e-12
    al, ap, A = [], [], []
    for i in np.nonzero(ok)[0]:
        a = ff.beta[i]
        a_prime = 2 * l_angle + math.pi - a
        try:
            j = FarField._index(ff.theta, a_prime)
        except KeyError:
            raise ValueError(
                f"reflected direction {a_prime % TWO_PI!r} for l angle {l_angle!r} is not on the observation grid"
            ) from None
        al.append((math.cos(a), math.sin(a)))
        ap.append((math.cos(a_prime), math.sin(a_prime)))
        A.append(ff.values[i, j])
    if len(A) < 3:
        raise ValueError("fewer than three usable pairs on this grid")
    return AmplitudePairSet(l, np.asarray(al), np.asarray(ap), np.asarray(A), ff.k)
