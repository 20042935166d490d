"""Shape combinatorics for Segre varieties.

A shape is a tuple ``n1 >= n2 >= ... >= nd >= 2`` with ``d >= 3``.  From
it we derive the ambient dimension ``Pi``, the variety dimension
``Sigma``, the largest rank ``rbar`` the certificate can address, and the
expected codimension ``ell(r) = Pi - r (Sigma + 1)`` of the r-secant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import IndexOutOfRange, NotApplicable


@dataclass(frozen=True)
class Shape:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) < 3:
            raise ValueError(f"need at least 3 modes, got {dims}")
        if any(n < 2 for n in dims):
            raise ValueError(f"mode sizes must be >= 2 (squeeze size-1 modes first): {dims}")
        if any(a < b for a, b in zip(dims, dims[1:])):
            raise ValueError(f"mode sizes must be non-increasing: {dims}")

    @classmethod
    def normalized(cls, dims) -> Shape:
        return cls(tuple(sorted((int(n) for n in dims), reverse=True)))

    @classmethod
    def parse(cls, text: str) -> Shape:
        """Parse ``"5,5,5"`` (order-insensitive, normalized to descending)."""
        try:
            dims = [int(tok) for tok in text.replace("x", ",").split(",") if tok.strip()]
        except ValueError as exc:
            raise ValueError(f"malformed shape {text!r}") from exc
        return cls.normalized(dims)

    @property
    def order(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)

    def __getitem__(self, k):
        return self.dims[k]

    def __str__(self):
        return ",".join(map(str, self.dims))


@dataclass(frozen=True)
class DerivedQuantities:
    Pi: int
    Sigma: int
    rbar: int
    perfect: bool

    def ell(self, r: int) -> int:
        return self.Pi - r * (self.Sigma + 1)


def derive(shape: Shape) -> DerivedQuantities:
    Pi = math.prod(shape.dims)
    Sigma = sum(n - 1 for n in shape.dims)
    rbar = -(-Pi // (Sigma + 1)) - 1
    return DerivedQuantities(Pi=Pi, Sigma=Sigma, rbar=rbar, perfect=Pi % (Sigma + 1) == 0)


def sigma_tail(shape: Shape) -> int:
    """Sum of (n_i - 1) over all modes but the first."""
    return sum(n - 1 for n in shape.dims[1:])


def linear_index(dims, multi) -> int:
    """1-based linear index, last mode fastest."""
    if len(multi) != len(dims):
        raise IndexOutOfRange(f"multi-index {multi} has wrong length for {tuple(dims)}")
    m = 0
    for i, n in zip(multi, dims):
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"index {i} outside 1..{n}")
        m = m * n + (i - 1)
    return m + 1


def multi_index(dims, m: int) -> tuple[int, ...]:
    Pi = math.prod(dims)
    if not 1 <= m <= Pi:
        raise IndexOutOfRange(f"linear index {m} outside 1..{Pi}")
    m -= 1
    out = []
    for n in reversed(tuple(dims)):
        m, i = divmod(m, n)
        out.append(i + 1)
    return tuple(reversed(out))


class ExceptionType(str, Enum):
    DEFECTIVE = "defective"
    SPORADIC = "sporadic"
    UNBALANCED = "unbalanced"


@dataclass(frozen=True)
class ExceptionKind:
    kind: ExceptionType
    reason: str
    description: str

    def __str__(self):
        return f"{self.kind.value} ({self.description})"


# Known non-identifiable (shape, r) pairs at subgeneric rank.
_SPORADIC_TABLE = {
    ((4, 4, 3), 5): (ExceptionType.DEFECTIVE, "secant variety is defective"),
    ((4, 4, 4), 6): (ExceptionType.SPORADIC, "two decompositions through a general point"),
    ((6, 6, 3), 8): (ExceptionType.SPORADIC, "finitely many decompositions, more than one"),
    ((2, 2, 2, 2, 2), 5): (ExceptionType.SPORADIC, "two decompositions through a general point"),
}


def unbalanced_threshold(shape: Shape) -> int:
    return math.prod(shape.dims[1:]) - sigma_tail(shape)


def exception_lookup(shape: Shape, r: int) -> ExceptionKind | None:
    shape = Shape.normalized(shape.dims)
    dims = shape.dims
    hit = _SPORADIC_TABLE.get((dims, r))
    if hit is not None:
        kind, why = hit
        return ExceptionKind(kind, why, f"{dims} at r={r}")
    if len(dims) == 4 and dims[0] == dims[1] and dims[2] == dims[3] == 2 and r == 2 * dims[0] - 1:
        return ExceptionKind(ExceptionType.DEFECTIVE, "secant variety is defective",
                             f"(n,n,2,2) with n={dims[0]} at r=2n-1")
    t = unbalanced_threshold(shape)
    if dims[0] > t and r >= t:
        return ExceptionKind(ExceptionType.UNBALANCED, "first factor too large for the rest",
                             f"n1={dims[0]} > {t} and r={r} >= {t}")
    return None


def kruskal_generic_bound(shape: Shape) -> int:
    """Largest r with r <= (min(n1,r) + min(n2,r) + min(n3,r) - 2) / 2."""
    if len(shape) != 3:
        raise NotApplicable("Kruskal's generic bound is stated for third-order tensors")
    best = 0
    # the right-hand side is constant once r >= n1
    for r in range(1, sum(shape.dims) + 1):
        if 2 * r <= sum(min(n, r) for n in shape.dims) - 2:
            best = r
    return best
