"""Kernel backend selection.

Imports the compiled Cython kernels when available, otherwise the numpy
fallback.  `WEEDSVM_BACKEND=python` forces the fallback; `=compiled` makes a
missing extension a hard error instead of a silent downgrade.
"""

import os

from . import _kernels_py

_requested = os.environ.get("WEEDSVM_BACKEND", "auto").strip().lower()

if _requested not in ("auto", "python", "compiled"):
    raise ImportError(f"WEEDSVM_BACKEND must be auto, python or compiled, not {_requested!r}")

if _requested == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "WEEDSVM_BACKEND=compiled but the weedsvm._kernels extension "
                "is not built; run `python setup.py build_ext --inplace`"
            )
        _impl = _kernels_py

BACKEND = _impl.BACKEND_NAME
glcm_counts = _impl.glcm_counts
lbp_code_map = _impl.lbp_code_map
smo_optimize = _impl.smo_optimize
