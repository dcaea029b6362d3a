"""Kernel backend selection.

Hot inner loops are JIT-compiled with numba by default.  Setting the
environment variable ``GRGCYCLES_NO_NUMBA=1`` (before import) forces the
pure NumPy/Python fallback path; the benchmark in ``benchmarks/`` compares
the two.  The flag is read once at import time.
"""

import os

__all__ = ["USING_NUMBA", "njit"]


def _want_numba() -> bool:
    flag = os.environ.get("GRGCYCLES_NO_NUMBA", "0").strip().lower()
    return flag in ("", "0", "false", "no", "off")


USING_NUMBA = False

if _want_numba():
    try:
        from numba import njit  # noqa: F401

        USING_NUMBA = True
    except ImportError:
        pass

if not USING_NUMBA:

    def njit(*args, **kwargs):
        """No-op replacement for numba.njit on the fallback path."""
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
