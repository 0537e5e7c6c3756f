"""Kernel backend selection.

GNPALPHA_NUMBA=0 forces the pure numpy/Python fallback; GNPALPHA_NUMBA=1
requires numba (import errors propagate).  Unset: use numba when available.
Both backends implement identical semantics; see benchmarks/bench_kernels.py
for the speed comparison.
"""

from __future__ import annotations

import os

_flag = os.environ.get("GNPALPHA_NUMBA", "").strip().lower()

if _flag in ("0", "false", "off", "no"):
    from . import kernels_numpy as kernels
elif _flag in ("1", "true", "on", "yes"):
    from . import kernels_numba as kernels
else:
    try:
        from . import kernels_numba as kernels
    except ImportError:  # pragma: no cover - exercised only without numba
        from . import kernels_numpy as kernels

BACKEND: str = kernels.BACKEND
USE_NUMBA: bool = BACKEND == "numba"
