"""Select the kernel implementation at import time.

The compiled extension is used when it imports; ``WHITHAM_MI_BACKEND=python``
forces the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if os.environ.get("WHITHAM_MI_BACKEND", "").lower() not in ("python", "py", "numpy"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        BACKEND = "compiled"


def max_workers():
    """Thread cap from WHITHAM_MI_THREADS, defaulting to the core count."""
    raw = os.environ.get("WHITHAM_MI_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1
