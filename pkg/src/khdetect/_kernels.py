"""Kernel backend selection.

Imports the compiled Cython module when available, otherwise the numpy
fallback.  KHDETECT_PURE=1 forces the fallback, which is handy for the
benchmark script and for debugging the compiled path.
"""

from __future__ import annotations

import os

from . import _purekernels

if os.environ.get("KHDETECT_PURE"):
    _impl = _purekernels
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _purekernels

BACKEND: str = _impl.BACKEND

f2_rank = _impl.f2_rank
f2_sparse_rank = _impl.f2_sparse_rank
grid_state_sums = getattr(_impl, "grid_state_sums", _purekernels.grid_state_sums)
grid_diff_pairs = getattr(_impl, "grid_diff_pairs", _purekernels.grid_diff_pairs)


def backend_name() -> str:
    """'compiled' when the Cython kernels loaded, else 'pure'."""
    return BACKEND
