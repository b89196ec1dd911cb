"""Parametric obstacle boundaries, interior poles and grating profiles.

Every closed boundary is a counter-clockwise curve ``r(t)`` on ``[0, 2 pi)``.
Points, derivatives and normals are vectorised: ``t`` of shape ``S`` gives
arrays of shape ``S + (2,)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

TWO_PI = 2.0 * math.pi

__all__ = [
    "Boundary",
    "Circle",
    "Ellipse",
    "Kite",
    "Triangle",
    "SampledCurve",
    "GratingProfile",
    "polar_directions",
    "eval_point",
    "eval_normal",
    "interior_poles",
    "winding_number",
    "support_function_exact",
    "support_function_sampled",
    "profile_nodes_and_poles",
    "grating_profile",
    "named_boundary",
]


def _vec(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (2,):
        raise ValueError(f"expected a 2-vector, got shape {v.shape}")
    return v


def _stack(x, y) -> np.ndarray:
    return np.stack(np.broadcast_arrays(x, y), axis=-1)


class Boundary:
    """Base class for closed parametric curves.

    Subclasses implement :meth:`point`; smooth ones also implement
    :meth:`derivative` and :meth:`second_derivative`.
    """

    kind: str = "abstract"
    smooth: bool = False

    center = (0.0, 0.0)

    def ref_point(self) -> np.ndarray:
        """Reference interior point used for pole placement."""
        return np.asarray(self.center, dtype=float)

    def point(self, t) -> np.ndarray:
        raise NotImplementedError

    def derivative(self, t) -> np.ndarray:
        raise NotImplementedError(f"{self.kind} boundary has no analytic derivative")

    def second_derivative(self, t) -> np.ndarray:
        raise NotImplementedError(f"{self.kind} boundary has no analytic second derivative")

    def normal(self, t) -> np.ndarray:
        d = self.derivative(t)
        n = np.stack([d[..., 1], -d[..., 0]], axis=-1)
        return n / np.linalg.norm(n, axis=-1, keepdims=True)

    def polygon(self, n: int = 2048) -> np.ndarray:
        """Dense sample of the curve, shape ``(n, 2)``."""
        return self.point(TWO_PI * np.arange(n) / n)


@dataclass(frozen=True)
class Circle(Boundary):
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0
    kind = "circle"
    smooth = True

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def point(self, t):
        t = np.asarray(t, dtype=float)
        c = self.ref_point()
        return _stack(c[0] + self.radius * np.cos(t), c[1] + self.radius * np.sin(t))

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(-self.radius * np.sin(t), self.radius * np.cos(t))

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(-self.radius * np.cos(t), -self.radius * np.sin(t))


@dataclass(frozen=True)
class Ellipse(Boundary):
    """``(a cos t, b sin t)`` shifted by ``center``."""

    a: float = 2.0
    b: float = 1.0
    center: tuple[float, float] = (0.0, 0.0)
    kind = "ellipse"
    smooth = True

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("semi-axes must be positive")

    def point(self, t):
        t = np.asarray(t, dtype=float)
        c = self.ref_point()
        return _stack(c[0] + self.a * np.cos(t), c[1] + self.b * np.sin(t))

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(-self.a * np.sin(t), self.b * np.cos(t))

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(-self.a * np.cos(t), -self.b * np.sin(t))


@dataclass(frozen=True)
class Kite(Boundary):
    """``offset + (cos t + a2 cos 2t, b sin t)``.

    With ``offset = (-0.65, 0)`` this is the classical kite whose reference
    point is the origin; ``offset = (5.35, 2)`` gives the shifted kite
    centred at (6, 2).  The reference point is ``offset + (a2, 0)``.
    """

    offset: tuple[float, float] = (-0.65, 0.0)
    a2: float = 0.65
    b: float = 1.5
    kind = "kite"
    smooth = True

    @property
    def center(self) -> tuple[float, float]:
        return (float(self.offset[0]) + self.a2, float(self.offset[1]))

    def point(self, t):
        t = np.asarray(t, dtype=float)
        ox, oy = self.offset
        return _stack(ox + np.cos(t) + self.a2 * np.cos(2 * t), oy + self.b * np.sin(t))

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(-np.sin(t) - 2 * self.a2 * np.sin(2 * t), self.b * np.cos(t))

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(-np.cos(t) - 4 * self.a2 * np.cos(2 * t), -self.b * np.sin(t))


@dataclass(frozen=True)
class Triangle(Boundary):
    """Triangle in polar form about an interior point.

    ``r(t) = c + rho(t) (cos t, sin t)`` where ``rho(t)`` is the distance from
    ``c`` to the edge hit by the ray of angle ``t``.  Normals are the edge
    normals and are undefined at the vertex angles.
    """

    vertices: tuple = ((-1.0, 0.0), (1.0, 1.0), (1.0, -1.0))
    center: tuple[float, float] = (0.0, 0.0)
    kind = "triangle"
    smooth = False

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.shape != (3, 2):
            raise ValueError("triangle needs three 2-D vertices")
        if abs(self._signed_area(v)) < 1e-14:
            raise ValueError("degenerate triangle")
        c = self.ref_point()
        for i in range(3):
            p, q = v[i], v[(i + 1) % 3]
            cross = (q[0] - p[0]) * (c[1] - p[1]) - (q[1] - p[1]) * (c[0] - p[0])
            if cross * self._signed_area(v) <= 0:
                raise ValueError("triangle reference point must lie strictly inside")

    @staticmethod
    def _signed_area(v) -> float:
        return 0.5 * ((v[1, 0] - v[0, 0]) * (v[2, 1] - v[0, 1]) - (v[2, 0] - v[0, 0]) * (v[1, 1] - v[0, 1]))

    @property
    def vertex_angles(self) -> np.ndarray:
        d = np.asarray(self.vertices, dtype=float) - self.ref_point()
        return np.mod(np.arctan2(d[:, 1], d[:, 0]), TWO_PI)

    def _hit(self, t):
        """Ray distance and edge index for each angle."""
        t = np.asarray(t, dtype=float)
        v = np.asarray(self.vertices, dtype=float) - self.ref_point()
        dx, dy = np.cos(t), np.sin(t)
        best = np.full(t.shape, np.inf)
        edge = np.zeros(t.shape, dtype=int)
        for i in range(3):
            p, q = v[i], v[(i + 1) % 3]
            e = q - p
            det = -dx * e[1] + dy * e[0]
            with np.errstate(divide="ignore", invalid="ignore"):
                s = (-p[0] * e[1] + p[1] * e[0]) / det
                u = (dx * p[1] - dy * p[0]) / det
            ok = (u >= -1e-12) & (u <= 1 + 1e-12) & (s > 0) & (s < best)
            best = np.where(ok, s, best)
            edge = np.where(ok, i, edge)
        return best, edge

    def point(self, t):
        t = np.asarray(t, dtype=float)
        rho, _ = self._hit(t)
        c = self.ref_point()
        return _stack(c[0] + rho * np.cos(t), c[1] + rho * np.sin(t))

    def normal(self, t):
        t = np.asarray(t, dtype=float)
        tm = np.mod(t, TWO_PI)
        gap = np.abs(np.angle(np.exp(1j * (tm[..., None] - self.vertex_angles))))
        if np.any(gap < 1e-9):
            raise ValueError("triangle normal is undefined at a vertex")
        _, edge = self._hit(t)
        v = np.asarray(self.vertices, dtype=float)
        e = v[(edge + 1) % 3] - v[edge]
        n = np.stack([e[..., 1], -e[..., 0]], axis=-1)
        if self._signed_area(v) < 0:
            n = -n
        return n / np.linalg.norm(n, axis=-1, keepdims=True)


@dataclass(frozen=True)
class SampledCurve(Boundary):
    """Closed curve given by samples ``(t_i, r_i)``; linear interpolation."""

    t: np.ndarray = field(default_factory=lambda: np.zeros(0))
    points: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    center: tuple[float, float] = (0.0, 0.0)
    kind = "sampled"
    smooth = False

    def __post_init__(self):
        if len(self.t) < 3 or np.shape(self.points) != (len(self.t), 2):
            raise ValueError("need at least three (t, point) samples")

    def point(self, t):
        t = np.mod(np.asarray(t, dtype=float), TWO_PI)
        ts = np.asarray(self.t, dtype=float)
        pts = np.asarray(self.points, dtype=float)
        tt = np.concatenate([ts, [ts[0] + TWO_PI]])
        x = np.interp(t, tt, np.concatenate([pts[:, 0], pts[:1, 0]]), period=TWO_PI)
        y = np.interp(t, tt, np.concatenate([pts[:, 1], pts[:1, 1]]), period=TWO_PI)
        return _stack(x, y)

    def normal(self, t):
        raise NotImplementedError("normals are undefined on sampled curves")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------
def polar_directions(theta) -> np.ndarray:
    """Unit vectors ``(cos theta, sin theta)``; shape ``theta.shape + (2,)``."""
    th = np.asarray(theta, dtype=float)
    return _stack(np.cos(th), np.sin(th))


def eval_point(b: Boundary, t) -> np.ndarray:
    """Boundary point ``r(t)``."""
    return b.point(t)


def eval_normal(b: Boundary, t) -> np.ndarray:
    """Outward unit normal at ``r(t)``."""
    return b.normal(t)


def winding_number(polygon: np.ndarray, x) -> int:
    """Winding number of a closed polygon (shape ``(n, 2)``) around ``x``."""
    d = np.asarray(polygon, dtype=float) - _vec(x)
    ang = np.arctan2(d[:, 1], d[:, 0])
    step = np.diff(np.concatenate([ang, ang[:1]]))
    step = (step + math.pi) % TWO_PI - math.pi
    return int(round(step.sum() / TWO_PI))


def interior_poles(b: Boundary, J: int, scale: float, check: bool = True) -> np.ndarray:
    """Poles ``x_j = c + scale (r(2 pi j / J) - c)``, j = 0..J-1.

    ``c`` is the boundary's reference point (the origin for the classical
    shapes), so for those this is simply ``scale * r(t_j)``.

    Raises
    ------
    ValueError
        If a pole is not strictly inside the curve.
    """
    if J < 1:
        raise ValueError("need at least one pole")
    if not 0.0 < scale < 1.0 and not (scale == 0.0):
        raise ValueError("scale must lie in [0, 1)")
    c = b.ref_point()
    tj = TWO_PI * np.arange(J) / J
    poles = c + scale * (b.point(tj) - c)
    if check:
        poly = b.polygon()
        for p in poles:
            if winding_number(poly, p) != 1 or np.min(np.linalg.norm(poly - p, axis=1)) < 1e-9:
                raise ValueError(f"pole {p} is not strictly inside the boundary")
    return poles


def support_function_exact(b: Boundary, l) -> float:
    """Support value ``d(l) = min_{x in boundary} x . l`` for circles and ellipses."""
    lv = _vec(l)
    if isinstance(b, Circle):
        return float(b.ref_point() @ lv - b.radius)
    if isinstance(b, Ellipse):
        return float(b.ref_point() @ lv - math.hypot(b.a * lv[0], b.b * lv[1]))
    raise TypeError(f"no closed-form support function for {b.kind}")


def support_function_sampled(b: Boundary, l, n: int = 8192) -> float:
    """Support value by dense sampling; works for any boundary."""
    return float(np.min(b.polygon(n) @ _vec(l)))


# ---------------------------------------------------------------------------
# Gratings
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class GratingProfile:
    """One period ``[0, L]`` of a grating surface ``y = f(x)``.

    ``shape`` is evaluated on ``[0, L]``; :meth:`f` extends it periodically.
    ``node_rule`` is ``"uniform"`` (nodes at ``x = iL/N``, poles below every
    fourth node) or ``"sawtooth"`` (half the nodes on the slant, half on the
    vertical wall at ``x = L``).
    """

    period: float
    shape: Callable[[np.ndarray], np.ndarray]
    kind: str = "custom"
    node_rule: str = "uniform"
    pole_offset: tuple[float, float] = (0.0, -0.1)

    def f(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.asarray(self.shape(np.mod(x, self.period)), dtype=float)


def _profile_iii(x, period):
    return np.where(x <= period / 2, x, period - x)


def grating_profile(kind: str, period: float = math.pi) -> GratingProfile:
    """The four reference profiles, by Roman numeral."""
    kind = kind.upper()
    if kind == "I":
        return GratingProfile(period, lambda x: np.sin(2 * x), "I")
    if kind == "II":
        return GratingProfile(period, lambda x: np.sin(0.2 * x), "II")
    if kind == "III":
        return GratingProfile(period, lambda x: _profile_iii(x, period), "III")
    if kind == "IV":
        return GratingProfile(period, lambda x: np.asarray(x, dtype=float), "IV", "sawtooth", (-0.03, -0.05))
    if kind == "FLAT":
        return GratingProfile(period, lambda x: np.zeros_like(np.asarray(x, dtype=float)), "flat")
    raise ValueError(f"unknown profile {kind!r}")


def _below_profile(p: GratingProfile, pts: np.ndarray) -> np.ndarray:
    x, y = pts[:, 0], pts[:, 1]
    if p.node_rule == "sawtooth":
        # the vertical wall at x = L belongs to the surface; poles sit left of it
        return y < p.f(x) - 1e-12
    return y < p.f(x) - 1e-12


def profile_nodes_and_poles(p: GratingProfile, N: int, M: int, depth: float | None = None):
    """Collocation nodes on one period and poles below the surface.

    Returns ``(nodes, poles)`` with shapes ``(N, 2)`` and ``(M, 2)``.  Poles
    are every fourth node (the 4th, 8th, ...), shifted by ``pole_offset``.

    Raises
    ------
    ValueError
        If ``N < 4M``, a pole is not strictly below the profile, or (when
        ``depth`` is given) a pole lies at or below ``y = -depth``.
    """
    if N < 4 * M:
        raise ValueError("need N >= 4M nodes")
    L = p.period
    if p.node_rule == "uniform":
        t = np.arange(1, N + 1) * L / N
        nodes = np.column_stack([t, p.f(t)])
    elif p.node_rule == "sawtooth":
        if N % 2:
            raise ValueError("sawtooth rule needs even N")
        t = 2.0 * np.arange(1, N // 2 + 1) * L / N
        slant = np.column_stack([t, p.shape(t)])
        wall = np.column_stack([np.full(N // 2, L), p.shape(t)])
        nodes = np.vstack([slant, wall])
    else:
        raise ValueError(f"unknown node rule {p.node_rule!r}")
    poles = nodes[3::4][:M] + np.asarray(p.pole_offset, dtype=float)
    if not np.all(_below_profile(p, poles)):
        raise ValueError("a pole is not strictly below the profile")
    if depth is not None and np.any(poles[:, 1] <= -depth):
        raise ValueError("a pole lies outside the strip above y = -b")
    return nodes, poles


def named_boundary(name: str) -> Boundary:
    """Reference obstacles by name.

    ``ellipse`` (2 cos t, sin t); ``kite`` centred at the origin;
    ``triangle`` with vertices (-1,0), (1,1), (1,-1); ``thin-ellipse``
    (0.1 cos t, sin t); ``unit-circle``; ``circle62`` the unit circle about
    (6, 2); ``kite62`` the kite about (6, 2).
    """
    table = {
        "ellipse": lambda: Ellipse(2.0, 1.0),
        "kite": lambda: Kite(),
        "triangle": lambda: Triangle(),
        "thin-ellipse": lambda: Ellipse(0.1, 1.0),
        "unit-circle": lambda: Circle(),
        "circle62": lambda: Circle(center=(6.0, 2.0), radius=1.0),
        "kite62": lambda: Kite(offset=(5.35, 2.0)),
    }
    try:
        return table[name]()
    except KeyError:
        raise ValueError(f"unknown boundary {name!r}; choose from {sorted(table)}") from None
