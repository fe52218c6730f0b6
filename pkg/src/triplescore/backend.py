"""Compute backend selection: numba-compiled kernels or pure-numpy fallback.

The hot loops (CBOW negative-sampling updates, full-vocabulary cosine scans)
exist twice: an @njit implementation and a vectorized numpy one.  Which one
runs is decided once at import time:

  * TRIPLESCORE_BACKEND=numpy   force the numpy fallback
  * TRIPLESCORE_BACKEND=numba   require numba (ImportError if missing)
  * unset / "auto"              numba when importable, numpy otherwise

Both backends draw identical decision streams (see rng.py), so they differ
only in floating-point rounding.  benchmarks/benchmark_backends.py compares
their speed and agreement.
"""

from __future__ import annotations

import os

ENV_VAR = "TRIPLESCORE_BACKEND"

# fastmath stays off: kernel results must be reproducible bit-for-bit
# across runs of the same build.
NJIT_OPTIONS = {"cache": True, "nogil": True}

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def _select() -> str:
    choice = os.environ.get(ENV_VAR, "auto").strip().lower()
    if choice in ("", "auto"):
        return "numba" if HAS_NUMBA else "numpy"
    if choice == "numba":
        if not HAS_NUMBA:
            raise ImportError(
                "TRIPLESCORE_BACKEND=numba but numba is not importable"
            )
        return "numba"
    if choice == "numpy":
        return "numpy"
    raise ValueError(
        f"{ENV_VAR} must be 'numba', 'numpy', or 'auto', got {choice!r}"
    )


ACTIVE = _select()


def resolve(backend: str | None = None) -> str:
    """Validate an explicit backend name, defaulting to the active one."""
    if backend is None:
        return ACTIVE
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAS_NUMBA:
        raise ImportError("numba backend requested but numba is not importable")
    return backend
