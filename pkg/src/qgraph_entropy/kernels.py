"""Backend selection for the hot secular-equation kernels.

The compiled extension is used when it imports; otherwise, or when the
``QGRAPH_ENTROPY_PURE_PYTHON`` environment variable is non-empty, the numpy
fallback is used.  ``BACKEND`` names the active implementation.
"""

import os

from . import _pykernels

if os.environ.get("QGRAPH_ENTROPY_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

secular_gaps = _impl.secular_gaps
golden_minimize = _impl.golden_minimize
phase_sums = _impl.phase_sums
real_secular = _impl.real_secular


def available_backends():
    """Map of backend name to kernel module for every importable backend."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
