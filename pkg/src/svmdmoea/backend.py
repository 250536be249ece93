"""Kernel backend selection.

The compiled extension is used when available; otherwise the numpy/Python
fallback.  Call sites go through ``backend.kernels`` so the active backend
can be swapped at runtime (used by the benchmark and the parity tests).
Set ``SVMDMOEA_PURE_PYTHON=1`` to force the fallback at import time.
"""

import os

from . import _kernels_py

try:
    from . import _speedups as _compiled
except ImportError:  # extension not built
    _compiled = None

HAVE_COMPILED = _compiled is not None

_forced_python = os.environ.get("SVMDMOEA_PURE_PYTHON", "") not in ("", "0")
kernels = _kernels_py if (_forced_python or _compiled is None) else _compiled


def get_backend() -> str:
    """Name of the active backend: ``"compiled"`` or ``"python"``."""
    return "python" if kernels is _kernels_py else "compiled"


def set_backend(name: str) -> None:
    """Select the active backend (``"compiled"`` or ``"python"``)."""
    global kernels
    if name == "python":
        kernels = _kernels_py
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled backend is not available")
        kernels = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")
