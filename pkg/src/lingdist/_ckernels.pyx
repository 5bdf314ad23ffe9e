# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def fuse_counts(choices, weights, Py_ssize_t g):
    cdef const long long[:, :, ::1] c = np.ascontiguousarray(choices, dtype=np.int64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t q = c.shape[0], n = c.shape[1], m = c.shape[2]
    out = np.zeros((n, m, g))
    cdef double[:, :, ::1] o = out
    cdef Py_ssize_t l, i, j
    cdef long long k
    cdef double total = 0.0
    for l in range(q):
        total += w[l]
        for i in range(n):
            for j in range(m):
                k = c[l, i, j]
                if k < 0 or k >= g:
                    raise IndexError(f"term index {k} outside 0..{g - 1}")
                o[i, j, k] += w[l]
    for i in range(n):
        for j in range(m):
            for l in range(g):
                o[i, j, l] /= total
    return out


def deviation_sums(expect):
    cdef const double[:, ::1] e = np.ascontiguousarray(expect, dtype=np.float64)
    cdef Py_ssize_t n = e.shape[0], m = e.shape[1]
    out = np.zeros(m)
    cdef double[::1] o = out
    cdef Py_ssize_t i, l, j
    cdef double acc
    for j in range(m):
        acc = 0.0
        for i in range(n):
            for l in range(i + 1, n):
                acc += fabs(e[i, j] - e[l, j])
        o[j] = 2.0 * acc
    return out


def rebin(rows, lower, theta, Py_ssize_t g):
    cdef const double[:, ::1] r = np.ascontiguousarray(rows, dtype=np.float64)
    cdef const long long[::1] lo = np.ascontiguousarray(lower, dtype=np.int64)
    cdef const double[::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    cdef Py_ssize_t N = r.shape[0], G = r.shape[1]
    out = np.zeros((N, g))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t a, k, up
    cdef double v
    for a in range(N):
        for k in range(G):
            v = r[a, k]
            if v == 0.0:
                continue
            o[a, lo[k]] += v * (1.0 - th[k])
            up = lo[k] + 1
            if up > g - 1:
                up = g - 1
            o[a, up] += v * th[k]
    return out
