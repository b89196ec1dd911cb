"""Hot numerical kernels with numba and numpy implementations.

Two kernels dominate the run time of the workbench:

* ``jy_table`` -- integer-order Bessel J_n and Neumann Y_n for n = 0..nmax
  on an array of arguments (Miller downward recurrence for J, Neumann-series
  start values and upward recurrence for Y).
* ``grating_green_sum`` -- the truncated mode sum of the half-space
  quasiperiodic Green's function, evaluated pairwise.

Each has a scalar-loop version compiled by numba and a vectorised numpy
version; the public names dispatch on :data:`helmscat._accel.USE_NUMBA`.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import USE_NUMBA, njit

EULER_GAMMA = 0.57721566490153286061
_BIG = 1e250


def miller_start(nmax: int, x: float) -> int:
    """Even starting order for the downward recurrence."""
    top = max(float(nmax), float(x), 1.0)
    m = int(top + math.sqrt(160.0 * top) + 20.0)
    return m + (m & 1)


# ---------------------------------------------------------------------------
# Bessel table: numba loop version
# ---------------------------------------------------------------------------
@njit
def _jy_scalar(nmax, x, m, jout, yout, buf):
    if x == 0.0:
        jout[0] = 1.0
        for n in range(1, nmax + 1):
            jout[n] = 0.0
        for n in range(nmax + 1):
            yout[n] = -np.inf
        return
    buf[m + 1] = 0.0
    buf[m] = 1e-30
    for l in range(m, 0, -1):
        buf[l - 1] = (2.0 * l / x) * buf[l] - buf[l + 1]
        if abs(buf[l - 1]) > _BIG:
            for q in range(l - 1, m + 2):
                buf[q] *= 1.0 / _BIG
    norm = buf[0]
    s0 = 0.0
    s1 = 0.0
    sign = -1.0
    for kk in range(1, m // 2 + 1):
        norm += 2.0 * buf[2 * kk]
        s0 += sign * buf[2 * kk] / kk
        if 2 * kk + 1 <= m:
            s1 += sign * (2.0 * kk + 1.0) / (kk * (kk + 1.0)) * buf[2 * kk + 1]
        sign = -sign
    for n in range(nmax + 1):
        jout[n] = buf[n] / norm
    j0 = buf[0] / norm
    j1 = buf[1] / norm
    lg = math.log(0.5 * x) + EULER_GAMMA
    y0 = (2.0 / math.pi) * (lg * j0 - 2.0 * s0 / norm)
    yout[0] = y0
    if nmax >= 1:
        y1 = (1.0 / math.pi) * (-(2.0 / x) * j0 + 2.0 * (lg - 1.0) * j1 - 2.0 * s1 / norm)
        yout[1] = y1
        for n in range(1, nmax):
            yout[n + 1] = (2.0 * n / x) * yout[n] - yout[n - 1]


@njit
def _jy_table_loop(nmax, xs, m):
    npts = xs.shape[0]
    jt = np.empty((nmax + 1, npts))
    yt = np.empty((nmax + 1, npts))
    jcol = np.empty(nmax + 1)
    ycol = np.empty(nmax + 1)
    buf = np.empty(m + 2)
    for p in range(npts):
        _jy_scalar(nmax, xs[p], m, jcol, ycol, buf)
        for n in range(nmax + 1):
            jt[n, p] = jcol[n]
            yt[n, p] = ycol[n]
    return jt, yt


# ---------------------------------------------------------------------------
# Bessel table: numpy version
# ---------------------------------------------------------------------------
def _jy_table_numpy(nmax: int, xs: np.ndarray, m: int):
    zero = xs == 0.0
    x = np.where(zero, 1.0, xs)
    buf = np.zeros((m + 2, x.size))
    buf[m] = 1e-30
    for l in range(m, 0, -1):
        nxt = (2.0 * l / x) * buf[l] - buf[l + 1]
        big = np.abs(nxt) > _BIG
        buf[l - 1] = nxt
        if big.any():
            buf[l - 1 :, big] *= 1.0 / _BIG
    kk = np.arange(1, m // 2 + 1)
    even = buf[2 * kk]
    sign = np.where(kk % 2 == 1, -1.0, 1.0)[:, None]
    norm = buf[0] + 2.0 * even.sum(axis=0)
    s0 = (sign / kk[:, None] * even).sum(axis=0)
    odd_k = kk[2 * kk + 1 <= m]
    w1 = (2.0 * odd_k + 1.0) / (odd_k * (odd_k + 1.0))
    s1 = (sign[: odd_k.size] * w1[:, None] * buf[2 * odd_k + 1]).sum(axis=0)
    jt = buf[: nmax + 1] / norm
    j0 = buf[0] / norm
    j1 = buf[1] / norm
    lg = np.log(0.5 * x) + EULER_GAMMA
    yt = np.empty((nmax + 1, x.size))
    yt[0] = (2.0 / np.pi) * (lg * j0 - 2.0 * s0 / norm)
    if nmax >= 1:
        yt[1] = (1.0 / np.pi) * (-(2.0 / x) * j0 + 2.0 * (lg - 1.0) * j1 - 2.0 * s1 / norm)
        with np.errstate(over="ignore", invalid="ignore"):
            for n in range(1, nmax):
                yt[n + 1] = (2.0 * n / x) * yt[n] - yt[n - 1]
    if zero.any():
        jt[:, zero] = 0.0
        jt[0, zero] = 1.0
        yt[:, zero] = -np.inf
    return jt, yt


def jy_table(nmax: int, x, use_numba: bool | None = None):
    """J_n(x) and Y_n(x) for n = 0..nmax on a flat array of x >= 0.

    Returns two float arrays of shape ``(nmax + 1, x.size)``.  Entries of Y
    that overflow come back as +-inf; callers decide whether that is an error.
    """
    xs = np.ascontiguousarray(np.ravel(x), dtype=float)
    if xs.size == 0:
        return np.empty((nmax + 1, 0)), np.empty((nmax + 1, 0))
    m = miller_start(nmax, xs.max())
    use = USE_NUMBA if use_numba is None else use_numba
    if use:
        with np.errstate(over="ignore", invalid="ignore"):
            return _jy_table_loop(int(nmax), xs, int(m))
    return _jy_table_numpy(int(nmax), xs, int(m))


# ---------------------------------------------------------------------------
# Quasiperiodic Green's function mode sum
# ---------------------------------------------------------------------------
@njit
def _green_sum_loop(x1, x2, s1, s2, lam, mu, b, period):
    npts = x1.shape[0]
    out = np.empty(npts, dtype=np.complex128)
    nmodes = lam.shape[0]
    for p in range(npts):
        hi = max(x2[p], s2[p])
        lo = min(x2[p], s2[p])
        dx = x1[p] - s1[p]
        acc = 0.0 + 0.0j
        for q in range(nmodes):
            m = mu[q]
            gj = (np.exp(1j * m * (hi + lo + 2.0 * b)) - np.exp(1j * m * (hi - lo))) / (2j * m)
            acc += np.exp(1j * lam[q] * dx) * gj
        out[p] = acc / period
    return out


def _green_sum_numpy(x1, x2, s1, s2, lam, mu, b, period, chunk=4096):
    out = np.empty(x1.size, dtype=complex)
    for start in range(0, x1.size, chunk):
        sl = slice(start, start + chunk)
        hi = np.maximum(x2[sl], s2[sl])[:, None]
        lo = np.minimum(x2[sl], s2[sl])[:, None]
        dx = (x1[sl] - s1[sl])[:, None]
        gj = (np.exp(1j * mu * (hi + lo + 2.0 * b)) - np.exp(1j * mu * (hi - lo))) / (2j * mu)
        out[sl] = (np.exp(1j * lam * dx) * gj).sum(axis=1) / period
    return out


def grating_green_sum(x1, x2, s1, s2, lam, mu, b, period, use_numba: bool | None = None):
    """Mode sum (1/L) sum_j e^{i lam_j (x1 - s1)} g_j(x2, s2) over flat pair arrays.

    ``g_j`` uses the combined-exponent form
    ``[e^{i mu (hi + lo + 2b)} - e^{i mu (hi - lo)}] / (2 i mu)`` with
    ``hi = max(x2, s2)`` and ``lo = min(x2, s2)``, so no evanescent
    intermediate exceeds the net exponent.
    """
    args = [np.ascontiguousarray(np.ravel(a), dtype=float) for a in (x1, x2, s1, s2)]
    lam = np.ascontiguousarray(lam, dtype=float)
    mu = np.ascontiguousarray(mu, dtype=complex)
    use = USE_NUMBA if use_numba is None else use_numba
    if use:
        return _green_sum_loop(*args, lam, mu, float(b), float(period))
    return _green_sum_numpy(*args, lam, mu, float(b), float(period))
