"""Integer-order cylinder functions on the positive real axis.

J_l comes from Miller's downward recurrence normalised by
``J_0 + 2 sum J_2k = 1``.  Y_0 and Y_1 are assembled from the Neumann series
over the same normalised J values, and higher Y_l follow from the upward
recurrence, which is stable for Y.  H_l = J_l + i Y_l, and negative orders
use ``C_{-l} = (-1)^l C_l``.

Everything is vectorised over ``x``; the order is a scalar.  The heavy
lifting is in :func:`helmscat._kernels.jy_table`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import jy_table

MAX_ORDER = 200

__all__ = [
    "MAX_ORDER",
    "CylinderFunctionValue",
    "bessel_j",
    "bessel_y",
    "hankel1",
    "hankel1_derivative",
    "hankel1_orders",
    "bessel_j_derivative",
    "cylinder_value",
]


@dataclass(frozen=True)
class CylinderFunctionValue:
    """J, Y and H^(1) of one integer order at one argument."""

    order: int
    argument: float
    j: float
    y: float

    @property
    def h1(self) -> complex:
        return complex(self.j, self.y)


def _check_order(l: int, signed: bool) -> int:
    l = int(l)
    if not signed and l < 0:
        raise ValueError(f"order must be non-negative, got {l}")
    if abs(l) > MAX_ORDER:
        raise ValueError(f"|order| must not exceed {MAX_ORDER}, got {l}")
    return l


def _as_array(x, strict: bool) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    if np.any(~np.isfinite(arr)):
        raise ValueError("argument must be finite")
    if strict and np.any(arr <= 0):
        raise ValueError("argument must be positive")
    if not strict and np.any(arr < 0):
        raise ValueError("argument must be non-negative")
    return arr, scalar


def _finish(values: np.ndarray, shape, scalar: bool):
    values = values.reshape(shape)
    return values[()] if scalar else values


def _check_finite(y: np.ndarray, l: int) -> None:
    if not np.all(np.isfinite(y)):
        raise OverflowError(f"Y_{l}(x) is not representable for some requested x")


def bessel_j(l: int, x):
    """Bessel function J_l(x) for integer ``0 <= l <= 200`` and ``x >= 0``."""
    l = _check_order(l, signed=False)
    arr, scalar = _as_array(x, strict=False)
    jt, _ = jy_table(l, arr)
    return _finish(jt[l], arr.shape, scalar)


def bessel_y(l: int, x):
    """Neumann function Y_l(x) for integer ``0 <= l <= 200`` and ``x > 0``.

    Raises
    ------
    OverflowError
        If Y_l(x) exceeds the double range (small x, large l).
    """
    l = _check_order(l, signed=False)
    arr, scalar = _as_array(x, strict=True)
    _, yt = jy_table(l, arr)
    _check_finite(yt[l], l)
    return _finish(yt[l], arr.shape, scalar)


def _parity(l: int) -> float:
    return -1.0 if (l % 2) else 1.0


def hankel1(l: int, x):
    """Hankel function H_l^(1)(x) = J_l(x) + i Y_l(x) for signed integer l."""
    l = _check_order(l, signed=True)
    arr, scalar = _as_array(x, strict=True)
    n = abs(l)
    jt, yt = jy_table(n, arr)
    _check_finite(yt[n], n)
    h = (jt[n] + 1j * yt[n]) * (_parity(n) if l < 0 else 1.0)
    return _finish(h, arr.shape, scalar)


def hankel1_orders(lmax: int, x) -> np.ndarray:
    """H_l^(1)(x) for every l in ``-lmax..lmax``.

    Returns an array of shape ``(2 lmax + 1,) + x.shape``; row ``l + lmax``
    holds order ``l``.  One recurrence pass serves all orders.
    """
    lmax = _check_order(lmax, signed=False)
    arr, _ = _as_array(x, strict=True)
    jt, yt = jy_table(lmax, arr)
    if not np.all(np.isfinite(yt)):
        raise OverflowError(f"Y_l(x) is not representable for some l <= {lmax}")
    pos = jt + 1j * yt
    sign = np.where(np.arange(1, lmax + 1) % 2 == 1, -1.0, 1.0)[::-1, None]
    full = np.concatenate([pos[:0:-1] * sign, pos], axis=0)
    return full.reshape((2 * lmax + 1,) + arr.shape)


def hankel1_derivative(l: int, x):
    """dH_l^(1)/dx via ``H_{l-1}(x) - (l/x) H_l(x)``."""
    l = _check_order(l, signed=True)
    if abs(l - 1) > MAX_ORDER:
        raise ValueError(f"|order| must not exceed {MAX_ORDER}, got {l}")
    arr, scalar = _as_array(x, strict=True)
    value = hankel1(l - 1, arr) - (l / arr) * hankel1(l, arr)
    return _finish(np.asarray(value), arr.shape, scalar)


def bessel_j_derivative(l: int, x):
    """dJ_l/dx via ``J_{l-1}(x) - (l/x) J_l(x)`` (signed l allowed)."""
    l = _check_order(l, signed=True)
    arr, scalar = _as_array(x, strict=True)
    n = max(abs(l), abs(l - 1))
    jt, _ = jy_table(n, arr)

    def jsigned(m):
        return jt[abs(m)] * (_parity(m) if m < 0 else 1.0)

    return _finish(jsigned(l - 1) - (l / arr.ravel()) * jsigned(l), arr.shape, scalar)


def cylinder_value(l: int, x: float) -> CylinderFunctionValue:
    """Bundle J_l, Y_l and H_l^(1) at one (l, x) with l >= 0."""
    l = _check_order(l, signed=False)
    x = float(x)
    return CylinderFunctionValue(order=l, argument=x, j=float(bessel_j(l, x)), y=float(bessel_y(l, x)))
