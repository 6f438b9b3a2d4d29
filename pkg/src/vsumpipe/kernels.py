"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure-numpy versions when
it is not built. Set VSUMPIPE_PURE=1 to force the fallback (used by the
equivalence tests and the benchmark script).
"""

from __future__ import annotations

import os

if os.environ.get("VSUMPIPE_PURE") == "1":
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND
kts_scatter = _impl.kts_scatter
kts_dp = _impl.kts_dp
knapsack_table = _impl.knapsack_table
