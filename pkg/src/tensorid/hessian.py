"""Stacked Hessians of the hyperplane equations restricted to the Segre variety.

Each kernel row k_l defines a multilinear form q_l(a^1, ..., a^d).  At the
canonical point e1 x ... x e1, in the affine chart a^k_1 = 1, the Hessian
block (I, J) of q_l reads the kernel coefficient at the multi-index that is
1 everywhere except i+1 in mode I and j+1 in mode J.  Other points are
moved to the canonical one by a per-mode change of basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import linalg
from .errors import SingularBasisCompletion
from .field import Field
from .segre import Shape, derive, sigma_tail
from .tangent import RankOnePoint


@dataclass
class StackedHessian:
    H: np.ndarray          # Sigma x (ell * Sigma)
    blocks: np.ndarray     # ell x Sigma x Sigma
    point_index: int | None = None

    @property
    def ell(self) -> int:
        return self.blocks.shape[0]

    @property
    def sigma(self) -> int:
        return self.blocks.shape[1]


def _mode_offsets(dims) -> list[int]:
    offs = [0]
    for n in dims:
        offs.append(offs[-1] + n - 1)
    return offs


def _kernel_tensors(K_T, dims) -> np.ndarray:
    K_T = np.asarray(K_T)
    return K_T.reshape((K_T.shape[0],) + tuple(dims))


def canonical_hessian(K_T, shape: Shape, field: Field) -> StackedHessian:
    """Hessian of every kernel form at e1 x ... x e1 (valid only there)."""
    dims = tuple(shape.dims)
    return _hessian_from_tensors(_kernel_tensors(K_T, dims), dims, field)


def _hessian_from_tensors(Kt: np.ndarray, dims, field: Field) -> StackedHessian:
    ell = Kt.shape[0]
    d = len(dims)
    offs = _mode_offsets(dims)
    sigma = offs[-1]
    blocks = field.zeros((ell, sigma, sigma))
    for I in range(d):
        for J in range(I + 1, d):
            idx = [slice(None)] + [0] * d
            idx[1 + I] = slice(1, None)
            idx[1 + J] = slice(1, None)
            B = Kt[tuple(idx)]           # ell x (n_I - 1) x (n_J - 1)
            blocks[:, offs[I]:offs[I + 1], offs[J]:offs[J + 1]] = B
            blocks[:, offs[J]:offs[J + 1], offs[I]:offs[I + 1]] = B.transpose(0, 2, 1)
    H = blocks.transpose(1, 0, 2).reshape(sigma, ell * sigma)
    return StackedHessian(H=H, blocks=blocks)


def completion_inverse(v, field: Field, rng: np.random.Generator | None = None) -> np.ndarray:
    """Invertible matrix whose first column is v; inverse of a map sending v to e1.

    The default completion swaps coordinate 1 with the first nonzero
    coordinate t of v and keeps the other unit vectors.  With ``rng`` the
    remaining columns are random, and a singular draw raises
    ``SingularBasisCompletion``.
    """
    v = np.asarray(v)
    n = len(v)
    nz = np.flatnonzero(v != 0)
    if nz.size == 0:
        raise SingularBasisCompletion("zero factor vector")
    Minv = field.identity(n)
    if rng is None:
        t = int(nz[0])
        Minv[:, [0, t]] = Minv[:, [t, 0]]
        Minv[:, 0] = v
        return Minv
    Minv[:, 1:] = field.random_array(rng, (n, n - 1))
    Minv[:, 0] = v
    if linalg.rank(Minv, field) < n:
        raise SingularBasisCompletion("random completion is singular")
    return Minv


def change_kernel_basis(K_T, dims, mats, field: Field) -> np.ndarray:
    """K'[l, i'] = sum_i K[l, i] prod_j mats[j][i_j, i'_j], as ell x dims."""
    Kt = _kernel_tensors(K_T, dims)
    for j, Minv in enumerate(mats):
        axis = 1 + j
        Kt = np.tensordot(np.asarray(Minv).T, Kt, axes=(1, axis))
        Kt = field.reduce(np.moveaxis(Kt, 0, axis))
    return Kt


def point_hessian(K_T, shape: Shape, point: RankOnePoint, field: Field,
                  rng: np.random.Generator | None = None, retries: int = 8) -> StackedHessian:
    """Chart Hessian (Sigma x ell*Sigma) at an arbitrary point of the variety."""
    dims = tuple(shape.dims)
    for attempt in range(retries):
        try:
            mats = [completion_inverse(v, field, rng) for v in point.factors]
            break
        except SingularBasisCompletion:
            if rng is None or attempt == retries - 1:
                raise
    Kt = change_kernel_basis(K_T, dims, mats, field)
    return _hessian_from_tensors(Kt, dims, field)


class S7Kind(str, Enum):
    STANDARD = "standard"
    WEAKLY_DEFECTIVE = "weakly_defective"


@dataclass(frozen=True)
class S7Mode:
    kind: S7Kind
    target: int


def classify_s7(shape: Shape, ell: int) -> S7Mode:
    if ell < 1:
        raise ValueError("ell must be >= 1")
    tail = sigma_tail(shape)
    if shape.dims[0] - 1 > ell * tail:
        return S7Mode(S7Kind.WEAKLY_DEFECTIVE, (ell + 1) * tail)
    return S7Mode(S7Kind.STANDARD, derive(shape).Sigma)


class HessianVerdict(str, Enum):
    PROVED = "proved"
    INCONCLUSIVE = "inconclusive"


def hessian_rank(H: StackedHessian, field: Field) -> int:
    return linalg.rank(H.H, field)


def hessian_verdict(H: StackedHessian, mode: S7Mode, field: Field) -> tuple[HessianVerdict, int]:
    rk = hessian_rank(H, field)
    verdict = HessianVerdict.PROVED if rk == mode.target else HessianVerdict.INCONCLUSIVE
    return verdict, rk
