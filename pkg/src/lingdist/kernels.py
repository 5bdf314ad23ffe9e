"""Backend selection for the numeric kernels.

The compiled extension is used when it imports; setting ``LINGDIST_PURE=1``
forces the numpy fallback.
"""
import os

from . import _kernels_py

try:
    if os.environ.get("LINGDIST_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from . import _ckernels as _backend

    BACKEND = "cython"
except ImportError:
    _backend = _kernels_py
    BACKEND = "python"

fuse_counts = _backend.fuse_counts
deviation_sums = _backend.deviation_sums
rebin = _backend.rebin

BACKENDS = {"python": _kernels_py}
if BACKEND == "cython":
    BACKENDS["cython"] = _backend
else:
    try:
        from . import _ckernels

        BACKENDS["cython"] = _ckernels
    except ImportError:
        pass
