"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementation
when the extension is missing or when PAIRCES_PURE_PYTHON=1 is set.
"""
from __future__ import annotations

import os

if os.environ.get("PAIRCES_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

apply_kinetic = _impl.apply_kinetic
apply_phase = _impl.apply_phase


def backend_name() -> str:
    """Name of the active kernel backend ("cython" or "python")."""
    return BACKEND
