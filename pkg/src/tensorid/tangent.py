"""Terracini matrices: tangent spaces to the Segre variety at sampled points."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import linalg
from .errors import InternalError
from .field import Field
from .segre import Shape, derive


@dataclass
class RankOnePoint:
    factors: list[np.ndarray]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.factors)

    def __post_init__(self):
        for k, f in enumerate(self.factors):
            if not np.any(np.asarray(f) != 0):
                raise ValueError(f"factor {k} of a rank-one point is zero")


def kron(vectors_or_mats, field: Field) -> np.ndarray:
    """Kronecker product of a sequence of vectors/matrices (last varies fastest)."""
    out = None
    for v in vectors_or_mats:
        v = np.asarray(v, dtype=object if field.exact else np.int64)
        if v.ndim == 1:
            v = v[:, None]
        if out is None:
            out = v
            continue
        a, b = out.shape
        c, e = v.shape
        prod = np.multiply.outer(out, v).transpose(0, 2, 1, 3).reshape(a * c, b * e)
        out = field.reduce(prod)
    return out


def sample_points(shape: Shape, r: int, seed, field: Field,
                  canonical_first: bool = False) -> list[RankOnePoint]:
    """r rank-one points with uniformly random factors, deterministic in ``seed``.

    GF(q) entries are uniform over [0, q); exact entries are uniform
    integers in [-99, 99].  A factor that comes out zero is redrawn.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    rng = np.random.default_rng(seed)
    points = []
    for i in range(r):
        factors = []
        for n in shape.dims:
            if i == 0 and canonical_first:
                e1 = field.zeros(n)
                e1[0] = 1
                factors.append(e1)
                continue
            v = field.random_array(rng, n)
            while not np.any(v != 0):
                v = field.random_array(rng, n)
            factors.append(v)
        points.append(RankOnePoint(factors))
    return points


def tangent_block(point: RankOnePoint, field: Field) -> np.ndarray:
    """Pi x sum(n_k) matrix ``[T^1 ... T^d]`` with T^k = a1 x .. x I_{n_k} x .. x ad."""
    blocks = []
    for k, n in enumerate(point.dims):
        parts = list(point.factors)
        parts[k] = field.identity(n)
        blocks.append(kron(parts, field))
    return np.concatenate(blocks, axis=1)


def _trim_columns(point: RankOnePoint) -> list[int]:
    """Column (within the point's block) dropped from each mode k >= 2.

    Removing column j of block k keeps the span whenever the k-th factor
    has a nonzero j-th coordinate.  We drop the last such column, which
    for a general point is the last column of the block.
    """
    drop = []
    offset = point.dims[0]
    for f in point.factors[1:]:
        nz = np.flatnonzero(np.asarray(f) != 0)
        drop.append(offset + int(nz[-1]))
        offset += len(f)
    return drop


@dataclass
class TangentAssembly:
    T: np.ndarray
    trimmed: bool
    points: list[RankOnePoint]
    shape: Shape
    field: Field

    @property
    def expected_ell(self) -> int:
        return derive(self.shape).ell(len(self.points))


def assemble(points: list[RankOnePoint], shape: Shape, field: Field,
             trim: bool = True) -> TangentAssembly:
    if not points:
        raise ValueError("need at least one point")
    cols = []
    for p in points:
        B = tangent_block(p, field)
        if trim:
            B = np.delete(B, _trim_columns(p), axis=1)
        cols.append(B)
    return TangentAssembly(np.concatenate(cols, axis=1), trim, list(points), shape, field)


class KernelStatus(str, Enum):
    OK = "ok"
    DEFECTIVE_SUSPECTED = "defective_suspected"


def hyperplane_kernel(assembly: TangentAssembly) -> tuple[np.ndarray, KernelStatus]:
    """Left kernel K^T of T and the nondefectivity gate l == ell."""
    K_T = linalg.left_kernel(assembly.T, assembly.field)
    ell = assembly.expected_ell
    l = K_T.shape[0]
    if l == ell:
        return K_T, KernelStatus.OK
    if l > ell:
        return K_T, KernelStatus.DEFECTIVE_SUSPECTED
    raise InternalError(f"kernel has {l} rows, fewer than the dimension count {ell}")
