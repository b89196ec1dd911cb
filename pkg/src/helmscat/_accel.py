"""Optional numba acceleration.

Hot loops are written once as plain Python and compiled with ``numba.njit``
when numba is importable and ``HELMSCAT_DISABLE_NUMBA`` is unset.  Setting
the variable to ``1`` (or ``true``/``yes``) selects the vectorised numpy
fallbacks instead; the choice is made once, at import time.
"""

from __future__ import annotations

import os

_FLAG = "HELMSCAT_DISABLE_NUMBA"


def _env_disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

USE_NUMBA: bool = _numba is not None and not _env_disabled()


def njit(func):
    """Compile ``func`` in nopython mode, or return it unchanged."""
    if _numba is None:
        return func
    return _numba.njit(cache=True, fastmath=False)(func)


def backend() -> str:
    """Name of the active kernel backend (``"numba"`` or ``"numpy"``)."""
    return "numba" if USE_NUMBA else "numpy"
