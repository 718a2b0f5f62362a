"""Optional numba acceleration.

Set ``PFAFFRIG_NO_NUMBA=1`` to force the pure numpy code paths, even when
numba is importable.
"""

import os


def _disabled_by_env():
    return os.environ.get("PFAFFRIG_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _disabled_by_env()


def _noop_jit(*args, **kwargs):
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(func):
        return func

    return wrap


if HAVE_NUMBA:
    njit = numba.njit
else:  # pragma: no cover
    njit = _noop_jit
