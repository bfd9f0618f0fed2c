"""Optional numba acceleration.

Set HOLANT_LAB_NO_NUMBA=1 to force the pure-numpy kernels.  When numba is
missing the same happens silently.
"""
from __future__ import annotations

import os

DISABLED = os.environ.get("HOLANT_LAB_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if DISABLED:
        raise ImportError
    import numba as _nb

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised when numba is absent
    _nb = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """numba.njit(cache=True) when available, identity otherwise."""
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        return _nb.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn
