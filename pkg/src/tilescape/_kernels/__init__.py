"""Grid kernels with a compiled core and a pure-Python fallback.

The compiled extension is used when it imports; setting
``TILESCAPE_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("TILESCAPE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend

BACKEND = "compiled" if compiled_backend is not None and _active is compiled_backend else "python"

label4 = _active.label4
bfs_distances = _active.bfs_distances
shortest_path = _active.shortest_path

__all__ = [
    "BACKEND",
    "bfs_distances",
    "compiled_backend",
    "label4",
    "python_backend",
    "shortest_path",
]
