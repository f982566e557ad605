"""Backend selection for the hot numeric kernels.

The loop kernels in ``_kernels`` are compiled with numba when it is
installed; setting the environment variable ``SEPKIT_BACKEND=numpy`` forces
the vectorized pure-numpy fallbacks instead (useful for debugging and for
the backend-parity tests). Anything else, or an absent variable, selects
numba whenever it is importable.
"""

from __future__ import annotations

import os

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


ENV_FLAG = "SEPKIT_BACKEND"


def use_numba() -> bool:
    """Whether the numba kernel path is active for this call."""
    if not HAVE_NUMBA:
        return False
    return os.environ.get(ENV_FLAG, "numba").strip().lower() != "numpy"


def active_backend() -> str:
    return "numba" if use_numba() else "numpy"
