"""Pure-numpy fallback for the compiled kernels in _kernels.pyx.

Same contracts, selected by _backend when the extension is missing or
QUATIMG_PURE_PYTHON is set.
"""

import numpy as np


def qmatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton-product matrix multiply of (N,K,4) by (K,M,4)."""
    a0, a1, a2, a3 = (np.ascontiguousarray(a[:, :, i]) for i in range(4))
    b0, b1, b2, b3 = (np.ascontiguousarray(b[:, :, i]) for i in range(4))
    out = np.empty((a.shape[0], b.shape[1], 4), dtype=np.float64)
    out[:, :, 0] = a0 @ b0 - a1 @ b1 - a2 @ b2 - a3 @ b3
    out[:, :, 1] = a0 @ b1 + a1 @ b0 + a2 @ b3 - a3 @ b2
    out[:, :, 2] = a0 @ b2 - a1 @ b3 + a2 @ b0 + a3 @ b1
    out[:, :, 3] = a0 @ b3 + a1 @ b2 - a2 @ b1 + a3 @ b0
    return out
