"""Kernel selection.

The compiled extension is used when it imports; otherwise, or when the
environment sets ``WGQED_PURE_PYTHON=1``, the NumPy kernels are used.
``WGQED_THREADS`` caps the number of threads the compiled kernels may use.
"""

import os

from . import _pykernels
from .errors import ValidationError

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

if _ckernels is not None and os.environ.get("WGQED_PURE_PYTHON", "") not in ("1", "true", "yes"):
    kernels = _ckernels
    BACKEND = "cython"
else:
    kernels = _pykernels
    BACKEND = "python"

AVAILABLE = {"python": _pykernels}
if _ckernels is not None:
    AVAILABLE["cython"] = _ckernels


def thread_count() -> int:
    raw = os.environ.get("WGQED_THREADS", "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ValidationError(f"WGQED_THREADS must be a positive integer, got {raw!r}", "WGQED_THREADS")
    return n
