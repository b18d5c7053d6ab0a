"""Backend selection for the hot loops.

The Cython extension is used when it was built; otherwise the pure-Python
module with identical signatures is loaded. Set CHAINFLUX_PURE_PYTHON=1 to
force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py as python_backend

compiled_backend = None
if not os.environ.get("CHAINFLUX_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend or python_backend
BACKEND = "compiled" if compiled_backend is not None else "python"

jacobi_eigh = _active.jacobi_eigh
pfaffian_parlett_reid = _active.pfaffian_parlett_reid
