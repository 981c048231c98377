# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Drop-in replacements for the numpy fallbacks: a combination scan for the
least support weight meeting the syndrome conditions, and a weight-filtered
index selection over xor-shifted truth tables.
"""

from libc.stdint cimport int64_t, uint64_t

import numpy as np

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

BACKEND_NAME = "compiled"


cdef int _scan_exact(uint64_t* a0, uint64_t* a1, int n, int w) nogil:
    """1 if some support of size exactly w has XOR(s0) = 0 and XOR(s1) != 0."""
    cdef int i1, i2, i3, i4, i5, i, j
    cdef uint64_t x1, y1, x2, y2, x3, y3, x4, y4
    cdef int c[64]
    if w == 1:
        for i1 in range(n):
            if a0[i1] == 0 and a1[i1] != 0:
                return 1
        return 0
    if w == 2:
        for i1 in range(n - 1):
            x1 = a0[i1]; y1 = a1[i1]
            for i2 in range(i1 + 1, n):
                if (x1 ^ a0[i2]) == 0 and (y1 ^ a1[i2]) != 0:
                    return 1
        return 0
    if w == 3:
        for i1 in range(n - 2):
            x1 = a0[i1]; y1 = a1[i1]
            for i2 in range(i1 + 1, n - 1):
                x2 = x1 ^ a0[i2]; y2 = y1 ^ a1[i2]
                for i3 in range(i2 + 1, n):
                    if (x2 ^ a0[i3]) == 0 and (y2 ^ a1[i3]) != 0:
                        return 1
        return 0
    if w == 4:
        for i1 in range(n - 3):
            x1 = a0[i1]; y1 = a1[i1]
            for i2 in range(i1 + 1, n - 2):
                x2 = x1 ^ a0[i2]; y2 = y1 ^ a1[i2]
                for i3 in range(i2 + 1, n - 1):
                    x3 = x2 ^ a0[i3]; y3 = y2 ^ a1[i3]
                    for i4 in range(i3 + 1, n):
                        if (x3 ^ a0[i4]) == 0 and (y3 ^ a1[i4]) != 0:
                            return 1
        return 0
    if w == 5:
        for i1 in range(n - 4):
            x1 = a0[i1]; y1 = a1[i1]
            for i2 in range(i1 + 1, n - 3):
                x2 = x1 ^ a0[i2]; y2 = y1 ^ a1[i2]
                for i3 in range(i2 + 1, n - 2):
                    x3 = x2 ^ a0[i3]; y3 = y2 ^ a1[i3]
                    for i4 in range(i3 + 1, n - 1):
                        x4 = x3 ^ a0[i4]; y4 = y3 ^ a1[i4]
                        for i5 in range(i4 + 1, n):
                            if (x4 ^ a0[i5]) == 0 and (y4 ^ a1[i5]) != 0:
                                return 1
        return 0
    # generic index-array walk for larger supports
    for j in range(w):
        c[j] = j
    while True:
        x1 = 0
        y1 = 0
        for j in range(w):
            x1 ^= a0[c[j]]
            y1 ^= a1[c[j]]
        if x1 == 0 and y1 != 0:
            return 1
        j = w - 1
        while j >= 0 and c[j] == n - w + j:
            j -= 1
        if j < 0:
            return 0
        c[j] += 1
        for i in range(j + 1, w):
            c[i] = c[i - 1] + 1


def min_support_weight(s0, s1, int cap) -> int:
    """Smallest support size w <= cap with XOR(s0) = 0 and XOR(s1) != 0.

    Returns 0 when no support of size <= cap qualifies.  Syndromes must fit
    in 64 bits and there can be at most 64 coordinates.
    """
    cdef int n = len(s0)
    if n > 64:
        raise ValueError("more than 64 coordinates")
    cdef uint64_t a0[64]
    cdef uint64_t a1[64]
    cdef int i, w, hit
    for i in range(n):
        a0[i] = s0[i]
        a1[i] = s1[i]
    for w in range(1, cap + 1):
        if w > n:
            break
        with nogil:
            hit = _scan_exact(a0, a1, n, w)
        if hit:
            return w
    return 0


def masked_min_support_weight(rows0, rows1, int c, excluded, int cap) -> int:
    """min_support_weight over the coordinates of [0, c) not in excluded.

    rows0 and rows1 are row bit patterns; syndromes are built per kept
    coordinate with row index order preserved.
    """
    if c > 64:
        raise ValueError("more than 64 coordinates")
    cdef uint64_t a0[64]
    cdef uint64_t a1[64]
    cdef uint64_t ex = <uint64_t> excluded
    cdef uint64_t r0[64]
    cdef uint64_t r1[64]
    cdef int n0 = len(rows0)
    cdef int n1 = len(rows1)
    if n0 > 64 or n1 > 64:
        raise ValueError("more than 64 rows")
    cdef int i, q, n, w, hit
    for i in range(n0):
        r0[i] = rows0[i]
    for i in range(n1):
        r1[i] = rows1[i]
    n = 0
    with nogil:
        for q in range(c):
            if (ex >> q) & <uint64_t> 1:
                continue
            a0[n] = 0
            a1[n] = 0
            for i in range(n0):
                a0[n] |= ((r0[i] >> q) & <uint64_t> 1) << i
            for i in range(n1):
                a1[n] |= ((r1[i] >> q) & <uint64_t> 1) << i
            n += 1
    for w in range(1, cap + 1):
        if w > n:
            break
        with nogil:
            hit = _scan_exact(a0, a1, n, w)
        if hit:
            return w
    return 0


def select_weight_hits(tu, gh, int wbase, allowed_mask):
    """Indices i with wbase + popcount(tu[i] ^ gh) hitting a set bit of
    allowed_mask (total weights below 64)."""
    cdef const uint64_t[::1] view = np.ascontiguousarray(tu, dtype=np.uint64)
    cdef Py_ssize_t n = view.shape[0]
    cdef uint64_t g = <uint64_t> gh
    cdef uint64_t mask = <uint64_t> allowed_mask
    cdef Py_ssize_t i
    cdef int w
    hits = []
    for i in range(n):
        w = wbase + __builtin_popcountll(view[i] ^ g)
        if w < 64 and (mask >> w) & <uint64_t> 1:
            hits.append(i)
    return np.asarray(hits, dtype=np.int64)
