"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the numpy
fallback is used. Both backends produce bit-identical pivot sequences, so
the choice affects speed only (see benchmarks/bench_kernels.py).
"""

from __future__ import annotations

import os

from . import _kernels_py as _py

NB_LOWER = _py.NB_LOWER
NB_UPPER = _py.NB_UPPER
BASIC = _py.BASIC
NB_FIXED = _py.NB_FIXED

if os.environ.get("ORIR_PURE_PYTHON"):
    _impl = _py
    USING_COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        USING_COMPILED = True
    except ImportError:
        _impl = _py
        USING_COMPILED = False

pivot_update = _impl.pivot_update
ftran = _impl.ftran
primal_ratio = _impl.primal_ratio
dual_ratio = _impl.dual_ratio
price = _impl.price
