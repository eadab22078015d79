"""Backend selection for the hot integration kernels.

Numba-jitted kernels are the default; setting CUBICBIF_BACKEND=numpy (or a
failed numba import) selects the pure-numpy path.  Both implement the same
node-level semantics; `benchmarks/bench_kernels.py` compares them.
"""

from __future__ import annotations

import os

__all__ = ["active_backend", "get_kernels"]

_FORCED = os.environ.get("CUBICBIF_BACKEND", "").strip().lower()

if _FORCED not in ("", "numba", "numpy"):
    raise ValueError(f"CUBICBIF_BACKEND must be 'numba' or 'numpy', got {_FORCED!r}")

if _FORCED == "numpy":
    _BACKEND = "numpy"
else:
    try:
        import numba  # noqa: F401

        _BACKEND = "numba"
    except ImportError:
        if _FORCED == "numba":
            raise
        _BACKEND = "numpy"


def active_backend() -> str:
    return _BACKEND


def get_kernels(name: str | None = None):
    """Return the kernel module for `name` (default: the active backend)."""
    which = name or _BACKEND
    if which == "numba":
        from . import _kernel_numba

        return _kernel_numba
    from . import _kernel_numpy

    return _kernel_numpy
