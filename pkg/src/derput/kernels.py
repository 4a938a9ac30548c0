"""Kernel selection: the compiled extension if it was built, else the numpy
fallback.  Set ``DERPUT_PURE_PYTHON=1`` to force the fallback."""

import os

from . import _kernels_py

if os.environ.get("DERPUT_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"
rref_modp = _impl.rref_modp
