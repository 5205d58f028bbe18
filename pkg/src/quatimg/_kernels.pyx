# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: quaternion matrix product.

Operates on raw (rows, cols, 4) float64 component arrays; shape checks
live in the callers.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def qmatmul(const double[:, :, ::1] a, const double[:, :, ::1] b):
    """Hamilton-product matrix multiply of (N,K,4) by (K,M,4)."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t k = a.shape[1]
    cdef Py_ssize_t m = b.shape[1]
    cdef cnp.ndarray[double, ndim=3] out = np.zeros((n, m, 4), dtype=np.float64)
    cdef double[:, :, ::1] o = out
    cdef Py_ssize_t i, j, l
    cdef double pa, pb, pc, pd, qa, qb, qc, qd

    with nogil:
        for i in range(n):
            for l in range(k):
                pa = a[i, l, 0]
                pb = a[i, l, 1]
                pc = a[i, l, 2]
                pd = a[i, l, 3]
                for j in range(m):
                    qa = b[l, j, 0]
                    qb = b[l, j, 1]
                    qc = b[l, j, 2]
                    qd = b[l, j, 3]
                    o[i, j, 0] += pa * qa - pb * qb - pc * qc - pd * qd
                    o[i, j, 1] += pa * qb + pb * qa + pc * qd - pd * qc
                    o[i, j, 2] += pa * qc - pb * qd + pc * qa + pd * qb
                    o[i, j, 3] += pa * qd + pb * qc - pc * qb + pd * qa
    return out
