"""Backend selection for the hot grid reductions.

The compiled extension is preferred when importable; set
JASTROW1D_BACKEND=python or =cython to force a choice (forcing cython on an
install without the extension raises).  Both backends satisfy the same
contracts; see grid_numpy for the reference semantics.
"""
from __future__ import annotations

import os

from . import grid_numpy

_requested = os.environ.get("JASTROW1D_BACKEND", "auto").lower()
if _requested not in ("auto", "cython", "python"):
    raise ValueError(f"JASTROW1D_BACKEND must be auto, cython or python, got {_requested!r}")

if _requested == "python":
    _impl = grid_numpy
    BACKEND = "python"
else:
    try:
        from . import _gridcore as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise ImportError("jastrow1d._gridcore is not built; reinstall or use JASTROW1D_BACKEND=python")
        _impl = grid_numpy
        BACKEND = "python"

grid_sums = _impl.grid_sums
pair_density = _impl.pair_density


def active_backend() -> str:
    return BACKEND
