"""Kernel backend selection.

The hot numeric kernels (modular row elimination, sub-Pfaffian tables,
Jacobian fill) exist in two builds: a numba @njit build and a pure-numpy
build with identical signatures and identical outputs.  The environment
variable SPINOR_SECANT_BACKEND forces one of them ("numba" or "numpy");
when unset, numba is used if it imports, numpy otherwise.

The choice is made once at import time.  Code that wants a specific
build regardless of the flag (the benchmark script, cross-checking
tests) imports _kernels_numba / _kernels_numpy directly.
"""

import os


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


HAS_NUMBA = _numba_available()

_requested = os.environ.get("SPINOR_SECANT_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ValueError(
        "SPINOR_SECANT_BACKEND must be 'numba' or 'numpy', got %r" % _requested
    )
if _requested == "numba" and not HAS_NUMBA:
    raise ImportError(
        "SPINOR_SECANT_BACKEND=numba requested but numba is not importable"
    )

BACKEND = _requested or ("numba" if HAS_NUMBA else "numpy")

if BACKEND == "numba":
    from . import _kernels_numba as kernels  # noqa: F401
else:
    from . import _kernels_numpy as kernels  # noqa: F401
