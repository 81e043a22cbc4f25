# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for truncated Taylor-series arithmetic.

Bivariate series use graded-lexicographic layout: monomial x^a y^b of total
degree d = a + b sits at index d*(d+1)/2 + b.
"""
import numpy as np
cimport cython

ctypedef fused scalar:
    double
    double complex


cdef inline Py_ssize_t _gidx(int a, int b) noexcept nogil:
    cdef int d = a + b
    return d * (d + 1) // 2 + b


cdef void _mul2(scalar[::1] p, scalar[::1] q, scalar[::1] out, int n) noexcept nogil:
    cdef int d1, b1, d2, b2, a1
    cdef Py_ssize_t i, j, base1
    cdef scalar pi
    for i in range(out.shape[0]):
        out[i] = 0
    for d1 in range(n + 1):
        base1 = d1 * (d1 + 1) // 2
        for b1 in range(d1 + 1):
            pi = p[base1 + b1]
            if pi == 0:
                continue
            a1 = d1 - b1
            for d2 in range(n - d1 + 1):
                for b2 in range(d2 + 1):
                    j = d2 * (d2 + 1) // 2 + b2
                    out[_gidx(a1 + d2 - b2, b1 + b2)] += pi * q[j]


cdef void _mul1(scalar[::1] p, scalar[::1] q, scalar[::1] out, int n) noexcept nogil:
    cdef int i, j
    cdef scalar pi
    for i in range(n + 1):
        out[i] = 0
    for i in range(n + 1):
        pi = p[i]
        if pi == 0:
            continue
        for j in range(n - i + 1):
            out[i + j] += pi * q[j]


def mul2(scalar[::1] p, scalar[::1] q, int n):
    """Truncated product of two bivariate series of order ``n``."""
    if scalar is double:
        res = np.empty(p.shape[0], dtype=np.float64)
    else:
        res = np.empty(p.shape[0], dtype=np.complex128)
    cdef scalar[::1] out = res
    _mul2(p, q, out, n)
    return res


def mul1(scalar[::1] p, scalar[::1] q, int n):
    """Truncated product of two univariate series of order ``n``."""
    if scalar is double:
        res = np.empty(n + 1, dtype=np.float64)
    else:
        res = np.empty(n + 1, dtype=np.complex128)
    cdef scalar[::1] out = res
    _mul1(p, q, out, n)
    return res


def horner2(scalar[::1] g, scalar[::1] d, int n):
    """Evaluate sum_k g[k] d^k for a bivariate series ``d`` with d[0] == 0."""
    cdef Py_ssize_t m = d.shape[0]
    cdef int k, K = g.shape[0] - 1
    if scalar is double:
        res = np.zeros(m, dtype=np.float64)
        tmp = np.empty(m, dtype=np.float64)
    else:
        res = np.zeros(m, dtype=np.complex128)
        tmp = np.empty(m, dtype=np.complex128)
    cdef scalar[::1] acc = res
    cdef scalar[::1] t = tmp
    cdef Py_ssize_t i
    if K > n:
        K = n
    acc[0] = g[K]
    for k in range(K - 1, -1, -1):
        _mul2(acc, d, t, n)
        for i in range(m):
            acc[i] = t[i]
        acc[0] += g[k]
    return res


def horner1(scalar[::1] g, scalar[::1] d, int n):
    """Evaluate sum_k g[k] d^k for a univariate series ``d`` with d[0] == 0."""
    cdef int k, K = g.shape[0] - 1
    if scalar is double:
        res = np.zeros(n + 1, dtype=np.float64)
        tmp = np.empty(n + 1, dtype=np.float64)
    else:
        res = np.zeros(n + 1, dtype=np.complex128)
        tmp = np.empty(n + 1, dtype=np.complex128)
    cdef scalar[::1] acc = res
    cdef scalar[::1] t = tmp
    cdef int i
    if K > n:
        K = n
    acc[0] = g[K]
    for k in range(K - 1, -1, -1):
        _mul1(acc, d, t, n)
        for i in range(n + 1):
            acc[i] = t[i]
        acc[0] += g[k]
    return res
