# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Bessel kernels; same algorithm as ``_bessel_py``."""
import numpy as np
from libc.math cimport fabs, sqrt
from libc.stdlib cimport malloc, free

cdef double SERIES_LIMIT = 8.0
cdef double RESCALE = 1e200


cdef void _series(int nmax, double x, double* out) noexcept nogil:
    cdef double h = 0.5 * x
    cdef double h2 = h * h
    cdef double lead = 1.0
    cdef double term, total
    cdef int n, k
    for n in range(nmax + 1):
        if n > 0:
            lead *= h / n
        term = lead
        total = term
        k = 0
        while True:
            k += 1
            term *= -h2 / (k * (n + k))
            total += term
            if fabs(term) <= 1e-17 * fabs(total):
                break
        out[n] = total


cdef void _miller(int nmax, double x, double* out) noexcept nogil:
    cdef int top = nmax if nmax > <int>x else <int>x
    cdef int start = top + 20 + <int>sqrt(40.0 * top)
    cdef int k, i
    cdef double jp1 = 0.0
    cdef double jk = 1e-30
    cdef double jm1
    cdef double norm = 0.0
    cdef double scale
    start += start % 2
    k = start
    while k > 0:
        if k <= nmax:
            out[k] = jk
        if k % 2 == 0:
            norm += 2.0 * jk
        jm1 = (2.0 * k / x) * jk - jp1
        jp1 = jk
        jk = jm1
        if fabs(jk) > RESCALE:
            jk /= RESCALE
            jp1 /= RESCALE
            norm /= RESCALE
            for i in range(k, nmax + 1):
                out[i] /= RESCALE
        k -= 1
    norm += jk
    out[0] = jk
    scale = 1.0 / norm
    for i in range(nmax + 1):
        out[i] *= scale


cdef void _jn_all(int nmax, double x, double* out) noexcept nogil:
    cdef int i
    if x == 0.0:
        out[0] = 1.0
        for i in range(1, nmax + 1):
            out[i] = 0.0
    elif x < SERIES_LIMIT:
        _series(nmax, x, out)
    else:
        _miller(nmax, x, out)


def jn_all(int nmax, double x):
    """[J_0(x), ..., J_nmax(x)] for x >= 0."""
    if x < 0.0:
        raise ValueError("x must be non-negative")
    res = np.empty(nmax + 1)
    cdef double[::1] view = res
    _jn_all(nmax, x, &view[0])
    return [float(v) for v in res]


def jn(long n, double x):
    """J_n(x) for integer n (negative orders by reflection) and x >= 0."""
    if x < 0.0:
        raise ValueError("x must be non-negative")
    cdef int a = <int>(n if n >= 0 else -n)
    cdef double* buf = <double*>malloc((a + 1) * sizeof(double))
    cdef double v
    if buf == NULL:
        raise MemoryError()
    try:
        _jn_all(a, x, buf)
        v = buf[a]
    finally:
        free(buf)
    if n < 0 and a % 2:
        v = -v
    return v


def bessel_table(int nmax, x):
    """Array of shape (len(x), nmax+1) with J_0..J_nmax at each x."""
    cdef double[::1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    res = np.empty((xs.shape[0], nmax + 1))
    cdef double[:, ::1] out = res
    cdef Py_ssize_t i
    for i in range(xs.shape[0]):
        if xs[i] < 0.0:
            raise ValueError("x must be non-negative")
    with nogil:
        for i in range(xs.shape[0]):
            _jn_all(nmax, xs[i], &out[i, 0])
    return res


def channel_sum(orders, coeffs, x):
    """sum_c coeffs[c] * J_{orders[c]}(x_k) for every grid point x_k."""
    cdef long[::1] ords = np.ascontiguousarray(orders, dtype=np.int64).ravel()
    c_arr = np.ascontiguousarray(coeffs, dtype=np.complex128).ravel()
    cdef double[::1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    if ords.shape[0] != c_arr.shape[0]:
        raise ValueError("orders and coeffs must have the same length")
    cdef Py_ssize_t nx = xs.shape[0]
    cdef Py_ssize_t nc = ords.shape[0]
    res = np.zeros(nx, dtype=np.complex128)
    if nc == 0:
        return res
    cdef double[::1] cre = np.ascontiguousarray(c_arr.real)
    cdef double[::1] cim = np.ascontiguousarray(c_arr.imag)
    cdef double[:, ::1] out = res.view(np.float64).reshape(nx, 2)
    cdef Py_ssize_t i, c
    cdef long o, a
    cdef int nmax = 0
    for c in range(nc):
        a = ords[c] if ords[c] >= 0 else -ords[c]
        if a > nmax:
            nmax = <int>a
    for i in range(nx):
        if xs[i] < 0.0:
            raise ValueError("x must be non-negative")
    cdef double* table = <double*>malloc((nmax + 1) * sizeof(double))
    cdef double v, re, im
    if table == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(nx):
                _jn_all(nmax, xs[i], table)
                re = 0.0
                im = 0.0
                for c in range(nc):
                    o = ords[c]
                    a = o if o >= 0 else -o
                    v = table[a]
                    if o < 0 and a % 2:
                        v = -v
                    re += cre[c] * v
                    im += cim[c] * v
                out[i, 0] = re
                out[i, 1] = im
    finally:
        free(table)
    return res
