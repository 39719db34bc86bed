"""Backend selection for the hot kernels.

Kernels exist in two flavors: numba @njit and pure numpy.  The active
flavor is chosen once at import time:

  PROXCOR_BACKEND=numba   require numba (raise if it cannot be imported)
  PROXCOR_BACKEND=numpy   force the pure-numpy fallback
  PROXCOR_BACKEND=auto    use numba when importable (default)

PROXCOR_THREADS caps numba's thread pool (0 or unset = auto).  Results
are independent of the thread count: every random draw is addressed by
a counter, never by generator state.
"""

import os

_choice = os.environ.get("PROXCOR_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"PROXCOR_BACKEND must be auto, numba or numpy (got {_choice!r})"
    )

USING_NUMBA = False
njit = None

if _choice in ("auto", "numba"):
    try:
        from numba import njit  # noqa: F401

        USING_NUMBA = True
    except ImportError:
        if _choice == "numba":
            raise RuntimeError(
                "PROXCOR_BACKEND=numba but numba is not installed"
            ) from None

if USING_NUMBA:
    _threads = os.environ.get("PROXCOR_THREADS", "0").strip()
    try:
        _cap = int(_threads)
    except ValueError:
        raise RuntimeError(f"PROXCOR_THREADS must be an integer (got {_threads!r})")
    if _cap > 0:
        import numba

        numba.set_num_threads(min(_cap, numba.config.NUMBA_NUM_THREADS))


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"
