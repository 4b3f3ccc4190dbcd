# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitmask kernels; drop-in replacement for ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, int8_t

cnp.import_array()


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _popcount(int64_t x) nogil:
    return __builtin_popcountll(<unsigned long long>x)


def binomial_table(int n_max):
    cdef Py_ssize_t n, k
    table = np.zeros((n_max + 2, n_max + 2), dtype=np.int64)
    cdef int64_t[:, ::1] t = table
    for n in range(n_max + 2):
        t[n, 0] = 1
        for k in range(1, n + 1):
            t[n, k] = t[n - 1, k - 1] + t[n - 1, k]
    return table


cdef inline int64_t _rank(int64_t mask, int M, const int64_t[:, ::1] table) nogil:
    cdef int64_t r = 0
    cdef int seen = 0
    cdef int p
    for p in range(M):
        if (mask >> p) & 1:
            seen += 1
            r += table[p, seen]
    return r


def enumerate_masks(int M, int N):
    from math import comb
    cdef Py_ssize_t dim = comb(M, N)
    out = np.empty(dim, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef int64_t v, t, limit
    cdef Py_ssize_t i
    if N == 0:
        o[0] = 0
        return out
    v = (<int64_t>1 << N) - 1
    limit = <int64_t>1 << M
    i = 0
    # Gosper's hack: next integer with the same popcount
    while v < limit:
        o[i] = v
        i += 1
        t = v | (v - 1)
        v = (t + 1) | (((~t & -~t) - 1) >> (__builtin_ctzll(<unsigned long long>v) + 1))
    return out


def rank_masks(masks, int M):
    cdef const int64_t[::1] m = np.ascontiguousarray(masks, dtype=np.int64).ravel()
    table = binomial_table(M)
    cdef const int64_t[:, ::1] t = table
    out = np.empty(m.shape[0], dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(m.shape[0]):
            o[i] = _rank(m[i], M, t)
    return out.reshape(np.shape(masks))


def single_op_table(masks, int M, bint dagger):
    cdef const int64_t[::1] m = np.ascontiguousarray(masks, dtype=np.int64)
    cdef Py_ssize_t dim = m.shape[0]
    table = binomial_table(M)
    cdef const int64_t[:, ::1] t = table
    targets = np.full((M, dim), -1, dtype=np.int64)
    signs = np.zeros((M, dim), dtype=np.int8)
    cdef int64_t[:, ::1] tg = targets
    cdef int8_t[:, ::1] sg = signs
    cdef Py_ssize_t i
    cdef int k, bit
    cdef int64_t x
    with nogil:
        for k in range(M):
            for i in range(dim):
                x = m[i]
                bit = (x >> k) & 1
                if (dagger and bit) or (not dagger and not bit):
                    continue
                tg[k, i] = _rank(x ^ (<int64_t>1 << k), M, t)
                sg[k, i] = 1 - 2 * (_popcount(x & ((<int64_t>1 << k) - 1)) & 1)
    return targets, signs


def pair_table(masks, int M):
    cdef const int64_t[::1] m = np.ascontiguousarray(masks, dtype=np.int64)
    cdef Py_ssize_t dim = m.shape[0]
    cdef Py_ssize_t n_pairs = M * (M - 1) // 2
    table = binomial_table(M)
    cdef const int64_t[:, ::1] t = table
    targets = np.full((n_pairs, dim), -1, dtype=np.int64)
    signs = np.zeros((n_pairs, dim), dtype=np.int8)
    cdef int64_t[:, ::1] tg = targets
    cdef int8_t[:, ::1] sg = signs
    cdef Py_ssize_t i, p
    cdef int k, l, parity
    cdef int64_t x, both
    with nogil:
        p = 0
        for k in range(M):
            for l in range(k + 1, M):
                both = (<int64_t>1 << k) | (<int64_t>1 << l)
                for i in range(dim):
                    x = m[i]
                    if (x & both) != both:
                        continue
                    parity = (_popcount(x & ((<int64_t>1 << k) - 1))
                              + _popcount(x & ((<int64_t>1 << l) - 1)) - 1)
                    tg[p, i] = _rank(x ^ both, M, t)
                    sg[p, i] = 1 - 2 * (parity & 1)
                p += 1
    return targets, signs


def word_table(masks, daggers, modes):
    cdef const int64_t[::1] m = np.ascontiguousarray(masks, dtype=np.int64)
    cdef const int8_t[::1] dg = np.ascontiguousarray(daggers, dtype=np.int8)
    cdef const int64_t[::1] md = np.ascontiguousarray(modes, dtype=np.int64)
    cdef Py_ssize_t dim = m.shape[0]
    cdef Py_ssize_t n_ops = md.shape[0]
    new_masks = np.empty(dim, dtype=np.int64)
    signs = np.empty(dim, dtype=np.int8)
    cdef int64_t[::1] nm = new_masks
    cdef int8_t[::1] sg = signs
    cdef Py_ssize_t i, j
    cdef int64_t x
    cdef int s, k, bit
    with nogil:
        for i in range(dim):
            x = m[i]
            s = 1
            for j in range(n_ops - 1, -1, -1):
                k = md[j]
                bit = (x >> k) & 1
                if (dg[j] and bit) or (not dg[j] and not bit):
                    s = 0
                    break
                if _popcount(x & ((<int64_t>1 << k) - 1)) & 1:
                    s = -s
                x = x ^ (<int64_t>1 << k)
            if s == 0:
                nm[i] = -1
                sg[i] = 0
            else:
                nm[i] = x
                sg[i] = s
    return new_masks, signs


def scatter_pairs(psi, targets, signs, Py_ssize_t dim_dst):
    cdef const double complex[::1] v = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef const int64_t[:, ::1] tg = np.ascontiguousarray(targets, dtype=np.int64)
    cdef const int8_t[:, ::1] sg = np.ascontiguousarray(signs, dtype=np.int8)
    cdef Py_ssize_t n_pairs = tg.shape[0], dim_src = tg.shape[1]
    out = np.zeros((n_pairs, dim_dst), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef Py_ssize_t p, i
    cdef int64_t j
    with nogil:
        for p in range(n_pairs):
            for i in range(dim_src):
                j = tg[p, i]
                if j >= 0:
                    if sg[p, i] > 0:
                        o[p, j] = v[i]
                    else:
                        o[p, j] = -v[i]
    return out


def gather_pairs(X, targets, signs):
    cdef const double complex[:, ::1] x = np.ascontiguousarray(X, dtype=np.complex128)
    cdef const int64_t[:, ::1] tg = np.ascontiguousarray(targets, dtype=np.int64)
    cdef const int8_t[:, ::1] sg = np.ascontiguousarray(signs, dtype=np.int8)
    cdef Py_ssize_t n_pairs = tg.shape[0], dim_src = tg.shape[1]
    out = np.zeros(dim_src, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t p, i
    cdef int64_t j
    with nogil:
        for p in range(n_pairs):
            for i in range(dim_src):
                j = tg[p, i]
                if j >= 0:
                    if sg[p, i] > 0:
                        o[i] = o[i] + x[p, j]
                    else:
                        o[i] = o[i] - x[p, j]
    return out
