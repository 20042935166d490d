"""Dense exact linear algebra over GF(q) and over the rationals.

Row operations only: pivots are searched downward in the current column
and columns are never permuted, so kernels read off an augmented
``[M | I]`` keep the original coordinate order.

GF(q) elimination runs in the compiled ``_modp`` kernel when it is
available and in the numpy fallback otherwise (``BACKEND`` says which).
Rational matrices are scaled row-wise to integers and reduced with
fraction-free (Bareiss) elimination; ``row_echelon`` over the rationals
is plain Fraction arithmetic and serves as the independent cross-check.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction

import numpy as np

from .field import Field

if os.environ.get("TENSORID_PURE_PYTHON"):
    from ._modp_py import echelon_modp
    BACKEND = "python"
else:
    try:
        from ._modp import echelon_modp
        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._modp_py import echelon_modp
        BACKEND = "python"


def _shape2(M) -> tuple[int, int]:
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={M.ndim}")
    return M.shape


def _modp_copy(M, field) -> np.ndarray:
    return np.ascontiguousarray(field.array(M), dtype=np.int64).copy()


# --- integer / rational helpers -------------------------------------------

def integer_rows(M) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators.

    Returns the integer rows and the per-row scale factors.
    """
    rows, scales = [], []
    for row in np.asarray(M, dtype=object):
        fr = [Fraction(x) for x in row]
        d = math.lcm(*(x.denominator for x in fr)) if fr else 1
        rows.append([int(x * d) for x in fr])
        scales.append(d)
    return rows, scales


def _primitive(row: list[int]) -> list[int]:
    g = math.gcd(*row)
    if g > 1:
        return [x // g for x in row]
    return row


def _bareiss(rows: list[list[int]], col_limit: int) -> list[int]:
    """One-step fraction-free elimination in place; returns pivot columns.

    Every intermediate entry is a minor of the input, so the divisions by
    the previous pivot are exact and all values stay integers.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(min(col_limit, n)):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        piv = prow[c]
        tail = prow[c:]
        for i in range(r + 1, m):
            row = rows[i]
            a = row[c]
            if a:
                row[c:] = [(piv * x - a * y) // prev for x, y in zip(row[c:], tail)]
            elif piv != prev:
                row[c:] = [piv * x // prev for x in row[c:]]
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def bareiss_rank(M) -> int:
    """Rank over the rationals of an integer matrix, fraction-free."""
    m, n = _shape2(M)
    if m == 0 or n == 0:
        return 0
    rows = [[int(x) for x in row] for row in np.asarray(M, dtype=object)]
    return len(_bareiss(rows, n))


def _object_matrix(rows, ncols: int) -> np.ndarray:
    out = np.empty((len(rows), ncols), dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out


# --- public operations -----------------------------------------------------

def row_echelon(M, field: Field) -> tuple[np.ndarray, int]:
    """Row echelon form by row operations only, and the rank."""
    m, n = _shape2(M)
    if not field.exact:
        E = _modp_copy(M, field)
        if m == 0 or n == 0:
            return E, 0
        piv = echelon_modp(E, field.q, n, False)
        return E, len(piv)
    E = np.empty((m, n), dtype=object)
    for idx, x in np.ndenumerate(np.asarray(M, dtype=object)):
        E[idx] = Fraction(x)
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if E[i, c] != 0), None)
        if p is None:
            continue
        if p != r:
            E[[r, p]] = E[[p, r]]
        for i in range(r + 1, m):
            if E[i, c] != 0:
                f = E[i, c] / E[r, c]
                E[i, c:] = E[i, c:] - f * E[r, c:]
        r += 1
    return E, r


def rank(M, field: Field) -> int:
    m, n = _shape2(M)
    if m == 0 or n == 0:
        return 0
    if not field.exact:
        E = _modp_copy(M, field)
        return len(echelon_modp(E, field.q, n, False))
    # fewer rows than columns keeps Bareiss cheaper
    if m > n:
        M = np.asarray(M, dtype=object).T
        m, n = n, m
    rows, _ = integer_rows(M)
    if _full_rank_mod(rows, n, CERT_PRIME):
        return m
    return len(_bareiss(rows, n))


# A nonzero m x m minor mod q is nonzero over Z, so full row rank modulo a
# prime certifies full row rank over Q; any shortfall falls back to Bareiss.
CERT_PRIME = 65521


def _full_rank_mod(rows: list[list[int]], n: int, q: int) -> bool:
    A = np.array([[x % q for x in row] for row in rows], dtype=np.int64)
    return len(echelon_modp(np.ascontiguousarray(A), q, n, False)) == len(rows)


def rref(M, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m, n = _shape2(M)
    if not field.exact:
        R = _modp_copy(M, field)
        if m == 0 or n == 0:
            return R, []
        return R, echelon_modp(R, field.q, n, True)
    R = np.empty((m, n), dtype=object)
    for idx, x in np.ndenumerate(np.asarray(M, dtype=object)):
        R[idx] = Fraction(x)
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i, c] != 0), None)
        if p is None:
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r, c:] = R[r, c:] / R[r, c]
        for i in range(m):
            if i != r and R[i, c] != 0:
                R[i, c:] = R[i, c:] - R[i, c] * R[r, c:]
        pivots.append(c)
        r += 1
    return R, pivots


def left_kernel(M, field: Field) -> np.ndarray:
    """Rows spanning {k : k M = 0}, read from the reduced ``[M | I]``."""
    m, n = _shape2(M)
    if not field.exact:
        Y = np.zeros((m, n + m), dtype=np.int64)
        Y[:, :n] = field.array(M)
        Y[:, n:] = np.eye(m, dtype=np.int64)
        piv = echelon_modp(Y, field.q, n, False)
        return Y[len(piv):, n:].copy()
    rows, scales = integer_rows(M) if m else ([], [])
    for i, row in enumerate(rows):
        row.extend(1 if j == i else 0 for j in range(m))
    piv = _bareiss(rows, n)
    kernel = []
    for row in rows[len(piv):]:
        # undo the row scaling: k' (D M) = 0  =>  (k' D) M = 0
        kernel.append(_primitive([x * s for x, s in zip(row[n:], scales)]))
    return _object_matrix(kernel, m)


def right_kernel(M, field: Field) -> np.ndarray:
    """Columns spanning {x : M x = 0}."""
    m, n = _shape2(M)
    if field.exact:
        return left_kernel(np.asarray(M, dtype=object).T, field).T
    R, pivots = rref(M, field) if m else (field.zeros((0, n)), [])
    free = [c for c in range(n) if c not in set(pivots)]
    N = np.zeros((n, len(free)), dtype=np.int64)
    q = field.q
    for k, f in enumerate(free):
        N[f, k] = 1
        for i, c in enumerate(pivots):
            N[c, k] = (-R[i, f]) % q
    return N


def matmul(A, B, field: Field) -> np.ndarray:
    if field.exact:
        return np.asarray(A, dtype=object).dot(np.asarray(B, dtype=object))
    return np.mod(np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64), field.q)


def is_zero(M) -> bool:
    return not np.any(np.asarray(M) != 0)
