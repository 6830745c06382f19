# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled finite-field kernels (row reduction and truncated convolution)."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


cdef int64_t _inv(int64_t a, int64_t p):
    cdef int64_t r = 1, e = p - 2
    a %= p
    while e:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


def rref_mod_p(matrix, long long p):
    if p >= (1 << 31):
        raise ValueError("modulus must be below 2^31")
    cdef Py_ssize_t nrows = len(matrix)
    if nrows == 0:
        return [], []
    cdef Py_ssize_t ncols = len(matrix[0])
    cdef int64_t *m = <int64_t *> malloc(nrows * ncols * sizeof(int64_t))
    if m == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, c, r = 0, piv
    cdef int64_t inv, f, v, tmp
    pivots = []
    try:
        for i in range(nrows):
            row = matrix[i]
            for j in range(ncols):
                v = row[j] % p
                m[i * ncols + j] = v
        for c in range(ncols):
            piv = -1
            for i in range(r, nrows):
                if m[i * ncols + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    tmp = m[r * ncols + j]
                    m[r * ncols + j] = m[piv * ncols + j]
                    m[piv * ncols + j] = tmp
            inv = _inv(m[r * ncols + c], p)
            if inv != 1:
                for j in range(c, ncols):
                    m[r * ncols + j] = m[r * ncols + j] * inv % p
            for i in range(nrows):
                if i == r:
                    continue
                f = m[i * ncols + c]
                if f == 0:
                    continue
                for j in range(c, ncols):
                    v = m[r * ncols + j]
                    if v:
                        m[i * ncols + j] = (m[i * ncols + j] - f * v) % p
                        if m[i * ncols + j] < 0:
                            m[i * ncols + j] += p
            pivots.append(c)
            r += 1
            if r == nrows:
                break
        rows = [[m[i * ncols + j] for j in range(ncols)] for i in range(r)]
    finally:
        free(m)
    return rows, pivots


def rank_mod_p(matrix, long long p):
    return len(rref_mod_p(matrix, p)[1])


def conv_mod_p(a, b, long long p, Py_ssize_t trunc):
    cdef Py_ssize_t na = min(len(a), trunc + 1), nb = min(len(b), trunc + 1)
    cdef int64_t *x = <int64_t *> malloc((na + 1) * sizeof(int64_t))
    cdef int64_t *y = <int64_t *> malloc((nb + 1) * sizeof(int64_t))
    cdef int64_t *out = <int64_t *> malloc((trunc + 1) * sizeof(int64_t))
    cdef Py_ssize_t i, j
    cdef int64_t xi
    if x == NULL or y == NULL or out == NULL:
        free(x); free(y); free(out)
        raise MemoryError()
    try:
        for i in range(na):
            x[i] = a[i] % p
        for j in range(nb):
            y[j] = b[j] % p
        for i in range(trunc + 1):
            out[i] = 0
        for i in range(na):
            xi = x[i]
            if xi == 0:
                continue
            for j in range(min(nb, trunc + 1 - i)):
                out[i + j] = (out[i + j] + xi * y[j]) % p
        return [out[i] for i in range(trunc + 1)]
    finally:
        free(x); free(y); free(out)
