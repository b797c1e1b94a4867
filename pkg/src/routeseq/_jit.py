"""Optional numba acceleration.

Set ``ROUTESEQ_DISABLE_NUMBA=1`` to force the pure-numpy kernels (useful for
debugging and for comparing the two paths). When numba is not importable the
numpy path is used automatically.
"""

import os

try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba_njit = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("ROUTESEQ_DISABLE_NUMBA", "").strip().lower() not in (
    "1",
    "true",
    "yes",
)


def njit(*args, **kwargs):
    """``numba.njit`` with ``cache=True``, or an identity decorator without numba."""
    if _numba_njit is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn
    kwargs.setdefault("cache", True)
    return _numba_njit(*args, **kwargs)
