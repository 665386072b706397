"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-numpy
backend is the fallback. RCRL_BACKEND=python|compiled forces a choice
(``compiled`` raises if the extension is missing).
"""

from __future__ import annotations

import os

from ..errors import ConfigError

_requested = os.environ.get("RCRL_BACKEND", "auto")

if _requested not in ("auto", "python", "compiled"):
    raise ConfigError(f"RCRL_BACKEND must be auto|python|compiled, got {_requested!r}")

if _requested == "python":
    from . import kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from . import kernels_py as _impl

        BACKEND = "python"

forward = _impl.forward
backward = _impl.backward
adam = _impl.adam
polyak = _impl.polyak


def backend_name() -> str:
    return BACKEND
