"""Hot inner-loop kernels with two interchangeable backends.

The default backend uses numba @njit loops. Set LECTURESEG_BACKEND=numpy to
select the pure-numpy/scipy fallback (also used automatically when numba is
unavailable). Both backends compute bit-identical results; see
tests/test_kernels.py and benchmarks/bench_kernels.py.
"""
from __future__ import annotations

import os
import warnings

from . import numpy_impl

_requested = os.environ.get("LECTURESEG_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise RuntimeError(f"LECTURESEG_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from . import numba_impl as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - depends on environment
        warnings.warn("numba unavailable, falling back to numpy kernels")
        _impl = numpy_impl
        BACKEND = "numpy"
else:
    _impl = numpy_impl
    BACKEND = "numpy"

correlate_at = _impl.correlate_at
hlm_sum = _impl.hlm_sum
crm_covered = _impl.crm_covered
suppress_split_edges = _impl.suppress_split_edges

__all__ = [
    "BACKEND",
    "correlate_at",
    "hlm_sum",
    "crm_covered",
    "suppress_split_edges",
]
