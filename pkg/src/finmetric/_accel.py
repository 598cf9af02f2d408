"""Optional numba acceleration.

Set ``FINMETRIC_NO_NUMBA=1`` to force the pure numpy/Python kernels.
"""
import os

try:
    from numba import njit
    numba_installed = True
except ImportError:  # pragma: no cover
    numba_installed = False

force_no_numba = os.environ.get("FINMETRIC_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

USE_NUMBA = numba_installed and not force_no_numba


def optional_njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the identity decorator.

    The undecorated function is always kept on ``.py_func`` so callers can
    run either path explicitly.
    """
    def decorator(func):
        if numba_installed:
            jitted = njit(*args, **kwargs)(func)
            return jitted
        func.py_func = func
        return func
    return decorator
