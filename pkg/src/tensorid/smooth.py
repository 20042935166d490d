"""Smoothness certificates for points of secant varieties of 3-factor Segre varieties.

For a tensor T of border rank r, pair every kernel vector u of a Young
flattening A_T with every vector w annihilating its image; the pair gives
the gradient of w^T A_X u as a function of X, i.e. the ambient tensor

    X[i, j, t] = sum_{S not containing t} sign(S, t) u[S, i] w[S u {t}, j].

If these gradients span a space of dimension Pi - r (Sigma + 1), the
codimension of the r-secant variety, T is a smooth point of it.  Stacking
the gradients of up to three rotated contractions strengthens the test.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from math import comb

import numpy as np

from . import linalg
from .contraction import rotate, wedge_incidence, young_flattening
from .errors import NotApplicable, RankShortfall
from .field import Field
from .segre import Shape, derive


@dataclass
class RotationReport:
    rotation: int
    p: int
    flattening_shape: tuple[int, int]
    flattening_rank: int
    expected_rank: int
    kernel_dim: int
    cokernel_dim: int
    image_dim: int


@dataclass
class SmoothnessCertificate:
    p: int
    rotations: tuple[int, ...]
    reports: list[RotationReport]
    image_dim: int
    target: int
    passed: bool
    exact: bool
    reason: str = ""
    gradients: np.ndarray | None = dc_field(default=None, repr=False)

    @property
    def flattening_rank(self) -> int:
        return self.reports[0].flattening_rank

    @property
    def kernel_dim(self) -> int:
        return self.reports[0].kernel_dim

    @property
    def cokernel_dim(self) -> int:
        return self.reports[0].cokernel_dim

    @property
    def label(self) -> str:
        if not self.passed:
            return "fail"
        return "pass" if self.exact else "pass (modular evidence)"

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "rotations": list(self.rotations),
            "flattening_rank": self.flattening_rank,
            "kernel_dim": self.kernel_dim,
            "cokernel_dim": self.cokernel_dim,
            "image_dim": self.image_dim,
            "target": self.target,
            "passed": self.passed,
            "label": self.label,
            "reason": self.reason,
            "per_rotation": [vars(rep) | {"flattening_shape": list(rep.flattening_shape)}
                             for rep in self.reports],
        }


def conormal_gradients(U: np.ndarray, W: np.ndarray, n3: int, p: int, field: Field) -> np.ndarray:
    """Gradient tensors for every (kernel, cokernel) pair: (kdim*cdim) x n1 x n2 x n3.

    ``U`` has kernel vectors as columns in (S, i) order, ``W`` cokernel
    vectors as columns in (S', j) order.
    """
    kdim, cdim = U.shape[1], W.shape[1]
    n1 = U.shape[0] // comb(n3, p)
    n2 = W.shape[0] // comb(n3, p + 1)
    Ur = U.T.reshape(kdim, comb(n3, p), n1)
    Wr = W.T.reshape(cdim, comb(n3, p + 1), n2)
    X = field.zeros((kdim, n1, cdim, n2, n3))
    for a, b, t, s in wedge_incidence(n3, p):
        term = np.multiply.outer(Ur[:, a, :], Wr[:, b, :])
        if s > 0:
            X[..., t] += term
        else:
            X[..., t] -= term
    X = field.reduce(X)
    return X.transpose(0, 2, 1, 3, 4).reshape(kdim * cdim, n1, n2, n3)


def normal_space_image(tensor, r: int, p: int | None = None, rotations=1,
                       field: Field | None = None) -> SmoothnessCertificate:
    """Dimension of the conormal image for the chosen rotations of the Young flattening.

    ``rotations`` is a count (use rotations 0..k-1) or an explicit
    sequence of rotation indices in {0, 1, 2}.  Raises ``RankShortfall``
    when a flattening has rank below r * C(n3 - 1, p).
    """
    from .field import QQ
    field = field or QQ
    T = np.asarray(tensor)
    if T.ndim != 3:
        raise NotApplicable("smoothness certificates need a third-order tensor")
    rots = tuple(range(rotations)) if isinstance(rotations, int) else tuple(rotations)
    if not rots or any(k not in (0, 1, 2) for k in rots):
        raise ValueError(f"bad rotations {rotations!r}")
    dims = T.shape
    Pi = int(np.prod(dims))
    target = Pi - r * (sum(n - 1 for n in dims) + 1)
    reports, blocks = [], []
    used_p = None
    for k in rots:
        R = rotate(T, k)
        n3 = R.shape[2]
        pk = n3 // 2 if p is None else p
        used_p = pk if used_p is None else used_p
        A = young_flattening(R, pk, field)
        expected = r * comb(n3 - 1, pk)
        rk = linalg.rank(A, field)
        if rk < expected:
            raise RankShortfall(
                f"rotation {k}: Young flattening rank {rk} < r*C({n3 - 1},{pk}) = {expected}")
        U = linalg.right_kernel(A, field)
        W = linalg.right_kernel(np.asarray(A).T, field)
        X = conormal_gradients(U, W, n3, pk, field)
        # back to the original coordinates: pairing is invariant under the axis permutation
        X = np.stack([rotate(x, 3 - k) for x in X]) if len(X) else X.reshape(0, *dims)
        G = X.reshape(len(X), Pi)
        reports.append(RotationReport(k, pk, A.shape, rk, expected, U.shape[1], W.shape[1],
                                      linalg.rank(G, field)))
        blocks.append(G)
    G = np.concatenate(blocks, axis=0)
    image = reports[0].image_dim if len(blocks) == 1 else linalg.rank(G, field)
    ok_rank = all(rep.flattening_rank == rep.expected_rank for rep in reports)
    passed = ok_rank and image == target
    if passed:
        reason = f"image dim {image} equals codimension {target}"
    elif not ok_rank:
        reason = "flattening rank exceeds r*C(n3-1,p); tensor is not of border rank r"
    elif image < target:
        reason = f"image dim {image} < codimension {target}"
    else:
        reason = f"image dim {image} > codimension {target}"
    return SmoothnessCertificate(used_p, rots, reports, image, target, passed, field.exact,
                                 reason, G)


# Largest r for which the single-contraction test is known to apply (cubic shapes).
TABULATED_RANGE = {4: 4, 5: 7, 6: 8, 7: 11, 8: 12, 9: 15}
TWO_ROTATION_RANGE = {9: 16}


class Applicability(str, Enum):
    IN_RANGE = "in_range"
    OUT_OF_TABULATED_RANGE = "out_of_tabulated_range"


@dataclass(frozen=True)
class ApplicabilityHint:
    status: Applicability
    rotations: int = 1


def applicability_hint(shape: Shape, r: int) -> ApplicabilityHint:
    if len(shape) != 3:
        raise NotApplicable("applicability ranges are tabulated for third-order shapes")
    n1, n2, n3 = shape.dims
    if n1 == n2 == n3:
        if r <= TABULATED_RANGE.get(n1, 0):
            return ApplicabilityHint(Applicability.IN_RANGE, 1)
        if r <= TWO_ROTATION_RANGE.get(n1, 0):
            return ApplicabilityHint(Applicability.IN_RANGE, 2)
    return ApplicabilityHint(Applicability.OUT_OF_TABULATED_RANGE)


def expected_codimension(shape: Shape, r: int) -> int:
    return derive(shape).ell(r)
