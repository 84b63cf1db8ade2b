"""Small dense determinants."""
from __future__ import annotations

import numpy as np


def det_pivot(a, dtype=None):
    """Determinant by Gaussian elimination with partial pivoting.

    Pass ``dtype=np.longdouble`` (or ``np.clongdouble``) to eliminate in
    extended precision.
    """
    A = np.array(a, dtype=dtype, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"need a square matrix, got shape {A.shape}")
    n = A.shape[0]
    det = A.dtype.type(1)
    for c in range(n):
        p = c + int(np.argmax(np.abs(A[c:, c])))
        if A[p, c] == 0:
            return A.dtype.type(0)
        if p != c:
            A[[c, p]] = A[[p, c]]
            det = -det
        det *= A[c, c]
        if c + 1 < n:
            A[c + 1 :, c:] -= np.outer(A[c + 1 :, c] / A[c, c], A[c, c:])
    return det
