"""Flattenings and Young flattenings of third-order tensors.

The Young flattening of T in F^{n1 x n2 x n3} for degree p is the matrix of

    F^{n1} (x) /\\^p F^{n3}  ->  F^{n2} (x) /\\^{p+1} F^{n3},
    e_i (x) e_S  |->  sum_{j, t not in S} T[i, j, t] sign(S, t) e_j (x) e_{S u {t}},

with rows indexed by (S', j) and columns by (S, i), subsets in
lexicographic order and the subset index varying slowest, so the matrix
is a grid of n2 x n1 slice blocks X_t = T[:, :, t].T.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import NotApplicable
from .field import Field


@dataclass(frozen=True)
class WedgeBasis:
    n: int
    p: int

    @property
    def subsets(self) -> tuple[tuple[int, ...], ...]:
        return _subsets(self.n, self.p)

    def index(self, S) -> int:
        return _subset_index(self.n, self.p)[tuple(S)]

    def __len__(self):
        return comb(self.n, self.p)

    @staticmethod
    def sign(S, t: int) -> int:
        """Sign of e_S ^ e_t = sign * e_{S u {t}} for sorted S, t not in S."""
        if t in S:
            raise ValueError(f"{t} already in {S}")
        return -1 if sum(1 for s in S if s > t) % 2 else 1


@lru_cache(maxsize=None)
def _subsets(n: int, p: int):
    return tuple(combinations(range(n), p))


@lru_cache(maxsize=None)
def _subset_index(n: int, p: int):
    return {S: k for k, S in enumerate(_subsets(n, p))}


@lru_cache(maxsize=None)
def wedge_incidence(n: int, p: int) -> tuple[tuple[int, int, int, int], ...]:
    """All (col_subset, row_subset, t, sign) with row_subset = col_subset u {t}."""
    rows = _subset_index(n, p + 1)
    out = []
    for a, S in enumerate(_subsets(n, p)):
        for t in range(n):
            if t in S:
                continue
            b = rows[tuple(sorted(S + (t,)))]
            out.append((a, b, t, WedgeBasis.sign(S, t)))
    return tuple(out)


def flattening(tensor, mode: int = 0) -> np.ndarray:
    """Mode-``mode`` unfolding: n_mode x (product of the other sizes)."""
    T = np.asarray(tensor)
    return np.moveaxis(T, mode, 0).reshape(T.shape[mode], -1)


def young_flattening(tensor, p: int, field: Field) -> np.ndarray:
    T = np.asarray(tensor)
    if T.ndim != 3:
        raise NotApplicable("Young flattenings are implemented for third-order tensors only")
    n1, n2, n3 = T.shape
    if not 1 <= p <= n3 // 2:
        raise NotApplicable(f"p={p} outside 1..{n3 // 2}")
    A = field.zeros((comb(n3, p + 1) * n2, comb(n3, p) * n1))
    for a, b, t, s in wedge_incidence(n3, p):
        X = T[:, :, t].T
        A[b * n2:(b + 1) * n2, a * n1:(a + 1) * n1] = X if s > 0 else -X
    return field.reduce(A)


def rotate(tensor, rotation: int = 1) -> np.ndarray:
    """Cyclic mode shift applied ``rotation`` times: R[i, j, k] = T[j, k, i]."""
    T = np.asarray(tensor)
    if T.ndim != 3:
        raise NotApplicable("rotations are defined for third-order tensors")
    for _ in range(rotation % 3):
        T = np.transpose(T, (2, 0, 1))
    return T


def outer(vectors, field: Field) -> np.ndarray:
    out = np.asarray(vectors[0], dtype=object if field.exact else np.int64)
    for v in vectors[1:]:
        out = field.reduce(np.multiply.outer(out, np.asarray(v, dtype=out.dtype)))
    return out


def tensor_from_factors(factors, field: Field) -> np.ndarray:
    """Sum over columns i of A^1[:, i] x ... x A^d[:, i]."""
    factors = [np.asarray(A) for A in factors]
    r = factors[0].shape[1]
    total = field.zeros(tuple(A.shape[0] for A in factors))
    for i in range(r):
        total = total + outer([A[:, i] for A in factors], field)
    return field.reduce(total)
