"""Numpy implementation of the GF(q) row elimination kernel.

Same contract as the compiled ``_modp.echelon_modp``; used when the
extension is not built or when ``TENSORID_PURE_PYTHON`` is set.
"""
import numpy as np


def echelon_modp(A, q, col_limit, reduced):
    m, n = A.shape
    r = 0
    pivots = []
    for c in range(min(col_limit, n)):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p], c:] = A[[p, r], c:]
        piv = pow(int(A[r, c]), -1, q)
        if piv != 1:
            A[r, c:] = A[r, c:] * piv % q
        if reduced:
            rows = np.flatnonzero(A[:, c])
            rows = rows[rows != r]
        else:
            rows = r + 1 + np.flatnonzero(A[r + 1:, c])
        if rows.size:
            pivot_row = A[r, c:]
            cols = c + np.flatnonzero(pivot_row)
            f = A[rows, c]
            block = A[np.ix_(rows, cols)]
            block -= np.outer(f, A[r, cols])
            A[np.ix_(rows, cols)] = np.mod(block, q)
        pivots.append(c)
        r += 1
    return pivots
