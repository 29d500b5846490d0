"""Kernel backend selection.

Hot array kernels in ``germflow._kernels`` are compiled with numba's
``@njit`` by default.  Setting the environment variable ``GERMFLOW_NUMBA=0``
(before import) selects the pure-numpy path instead; the kernel source is
written so the same function bodies run under either backend.
"""

import os

_flag = os.environ.get("GERMFLOW_NUMBA", "1").strip().lower()
NUMBA_REQUESTED = _flag not in ("0", "false", "off", "no")

try:
    import numba  # noqa: F401

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

USING_NUMBA = NUMBA_REQUESTED and NUMBA_AVAILABLE


def maybe_jit(func):
    """Return an ``@njit``-compiled version of *func*, or *func* unchanged
    when the numpy fallback is active."""
    if USING_NUMBA:
        return numba.njit(cache=True)(func)
    return func
