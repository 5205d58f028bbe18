"""Kernel backend selection.

The compiled Cython extension is preferred; the numpy implementation is
the fallback.  Set QUATIMG_PURE_PYTHON=1 to force the fallback (used by
the backend-equivalence tests and the benchmark).
"""

import os

if os.environ.get("QUATIMG_PURE_PYTHON"):
    from . import _kernels_py as _impl

    HAVE_COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        HAVE_COMPILED = True
    except ImportError:
        from . import _kernels_py as _impl

        HAVE_COMPILED = False

qmatmul = _impl.qmatmul

BACKEND_NAME = "compiled" if HAVE_COMPILED else "numpy"
