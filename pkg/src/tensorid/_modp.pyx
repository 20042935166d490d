# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(q) row elimination."""
from libc.stdint cimport int64_t


cdef int64_t _inv(int64_t a, int64_t q):
    cdef int64_t t = 0, newt = 1, r = q, newr = a, quo, tmp
    while newr != 0:
        quo = r // newr
        tmp = t - quo * newt
        t = newt
        newt = tmp
        tmp = r - quo * newr
        r = newr
        newr = tmp
    if t < 0:
        t += q
    return t


def echelon_modp(int64_t[:, ::1] A, int64_t q, Py_ssize_t col_limit, bint reduced):
    """Row-reduce ``A`` in place over GF(q); pivots only in columns < col_limit.

    Entries must already lie in [0, q).  Rows are swapped, columns never.
    Returns the list of pivot columns.
    """
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, p, start
    cdef int64_t piv, f, tmp, negf
    pivots = []
    if col_limit > n:
        col_limit = n
    for c in range(col_limit):
        if r == m:
            break
        p = -1
        for i in range(r, m):
            if A[i, c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for j in range(c, n):
                tmp = A[r, j]
                A[r, j] = A[p, j]
                A[p, j] = tmp
        piv = _inv(A[r, c], q)
        if piv != 1:
            for j in range(c, n):
                A[r, j] = A[r, j] * piv % q
        start = 0 if reduced else r + 1
        for i in range(start, m):
            if i == r:
                continue
            f = A[i, c]
            if f == 0:
                continue
            negf = q - f
            for j in range(c, n):
                if A[r, j] != 0:
                    A[i, j] = (A[i, j] + negf * A[r, j]) % q
        pivots.append(c)
        r += 1
    return pivots
