# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the exhaustive search loops (masks up to 64 bits)."""
from libc.stdint cimport uint64_t, int64_t


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int64_t wpop(uint64_t mask, int64_t* w) nogil:
    cdef int64_t s = 0
    while mask:
        s += w[__builtin_ctzll(mask)]
        mask &= mask - 1
    return s


def min_union_popcount(masks, int m):
    cdef int n = len(masks)
    if m < 1 or m > n:
        raise ValueError(f"m must be in 1..{n}")
    cdef uint64_t[64] mk
    cdef int[64] idx
    cdef uint64_t[65] acc
    cdef int i, j, c, best = 65
    cdef list witness = None
    for i in range(n):
        mk[i] = masks[i]
    acc[0] = 0
    for i in range(m):
        idx[i] = i
        acc[i + 1] = acc[i] | mk[i]
    while True:
        c = __builtin_popcountll(acc[m])
        if c < best:
            best = c
            witness = [idx[j] for j in range(m)]
        i = m - 1
        while i >= 0 and idx[i] == n - m + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        acc[i + 1] = acc[i] | mk[idx[i]]
        for j in range(i + 1, m):
            idx[j] = idx[j - 1] + 1
            acc[j + 1] = acc[j] | mk[idx[j]]
    return best, tuple(witness)


def coboundary_scan(int n_k, dmasks, wk, wk1, cobs):
    cdef int nb = len(cobs)
    cdef uint64_t[64] dm
    cdef int64_t[64] w0
    cdef int64_t[64] w1
    cdef uint64_t* cb
    cdef uint64_t i, g, gray_prev = 0, dphi = 0, best_g = 0, top
    cdef int64_t num, den, v, best_num = -1, best_den = 1
    cdef int j, flip
    cdef bint found = False
    for j in range(n_k):
        dm[j] = dmasks[j]
        w0[j] = wk[j]
    for j in range(len(wk1)):
        w1[j] = wk1[j]
    import array
    buf = array.array("Q", [int(b) for b in cobs])
    cdef uint64_t[:] cview = buf
    cb = &cview[0]
    top = (<uint64_t>1) << n_k
    with nogil:
        i = 1
        while i < top:
            g = i ^ (i >> 1)
            flip = __builtin_ctzll(g ^ gray_prev)
            gray_prev = g
            dphi ^= dm[flip]
            den = wpop(g ^ cb[0], w0)
            for j in range(1, nb):
                v = wpop(g ^ cb[j], w0)
                if v < den:
                    den = v
            if den != 0:
                num = wpop(dphi, w1)
                if not found:
                    found = True
                    best_num, best_den, best_g = num, den, g
                elif num * best_den < best_num * den or (num * best_den == best_num * den and g < best_g):
                    best_num, best_den, best_g = num, den, g
            i += 1
    if not found:
        return None
    return best_num, best_den, best_g
