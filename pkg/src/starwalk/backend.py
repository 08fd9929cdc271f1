"""Acceleration backend selection.

The hot inner loops (ball-walk stepping) are compiled with numba when it is
available.  Setting the environment variable STARWALK_NO_NUMBA to a non-empty
value other than "0" forces the pure-numpy fallback; the two paths produce
identical chains by construction.
"""

import os

_disabled = os.environ.get("STARWALK_NO_NUMBA", "") not in ("", "0")

try:
    if _disabled:
        raise ImportError("numba disabled via STARWALK_NO_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        """No-op stand-in so @njit-decorated modules still import."""
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco


def numba_available() -> bool:
    return HAS_NUMBA
