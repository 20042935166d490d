"""Uniqueness certificates for one given rank-r decomposition.

The pipeline compresses the decomposition to its multilinear-rank core,
certifies that the core tensor is a smooth point of the r-secant variety,
checks that the tangent spaces at the r given points span a space of the
expected dimension, and requires a full-rank chart Hessian at every
point.  All stages run in exact rational arithmetic by default; over
GF(q) a pass is only reported as modular evidence.
"""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import linalg
from .contraction import tensor_from_factors
from .errors import NotApplicable, RankShortfall, TooLarge
from .field import QQ, Field, field_from_spec, format_rational
from .hessian import point_hessian
from .segre import Shape, derive
from .smooth import SmoothnessCertificate, applicability_hint, normal_space_image
from .tangent import KernelStatus, RankOnePoint, assemble, hyperplane_kernel

FIXTURE_555R7 = Path(__file__).with_name("data") / "555r7.json"


class DecompositionFormatError(ValueError):
    pass


@dataclass
class Decomposition:
    """Factor matrices A^(k) of size n_k x r; column i of A^(k) is the k-th factor of term i."""

    factors: list[np.ndarray]

    def __post_init__(self):
        if len(self.factors) < 2:
            raise DecompositionFormatError("need at least two factor matrices")
        rs = {np.shape(A)[1] if np.ndim(A) == 2 else None for A in self.factors}
        if len(rs) != 1 or None in rs:
            raise DecompositionFormatError("factor matrices must be 2-D with a common column count")
        for k, A in enumerate(self.factors):
            for i in range(A.shape[1]):
                if not np.any(A[:, i] != 0):
                    raise DecompositionFormatError(f"column {i} of factor {k} is zero")

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(A.shape[0] for A in self.factors)

    @property
    def r(self) -> int:
        return self.factors[0].shape[1]

    @classmethod
    def from_dict(cls, doc: dict) -> Decomposition:
        try:
            shape = [int(n) for n in doc["shape"]]
            rank = int(doc["rank"])
            raw = doc["factors"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DecompositionFormatError(f"missing or malformed field: {exc}") from exc
        if len(raw) != len(shape):
            raise DecompositionFormatError(f"{len(raw)} factor matrices for a {len(shape)}-mode shape")
        factors = []
        for k, (n, M) in enumerate(zip(shape, raw)):
            try:
                A = QQ.array(M)
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise DecompositionFormatError(f"factor {k}: {exc}") from exc
            if A.shape != (n, rank):
                raise DecompositionFormatError(f"factor {k} has shape {A.shape}, expected {(n, rank)}")
            factors.append(A)
        return cls(factors)

    @classmethod
    def load(cls, path) -> Decomposition:
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise DecompositionFormatError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return {
            "shape": list(self.dims),
            "rank": self.r,
            "factors": [[[format_rational(x) for x in row] for row in A] for A in self.factors],
        }

    def tensor(self, field: Field = QQ) -> np.ndarray:
        return tensor_from_factors([field.array(A) for A in self.factors], field)

    def points(self, field: Field = QQ) -> list[RankOnePoint]:
        F = [field.array(A) for A in self.factors]
        return [RankOnePoint([A[:, i].copy() for A in F]) for i in range(self.r)]

    def sorted_modes(self) -> Decomposition:
        order = sorted(range(len(self.factors)), key=lambda k: -self.factors[k].shape[0])
        return Decomposition([self.factors[k] for k in order])


def multilinear_multiply(core, bases, field: Field = QQ) -> np.ndarray:
    """(Q_1, ..., Q_d) . core."""
    X = np.asarray(core)
    for k, Q in enumerate(bases):
        X = np.moveaxis(np.tensordot(np.asarray(Q), X, axes=(1, k)), 0, k)
    return field.reduce(X)


def compress(dec: Decomposition, field: Field = QQ) -> tuple[Decomposition, list[np.ndarray]]:
    """Core decomposition in bases of the factor column spaces: A^(k) = Q_k X^(k)."""
    core, bases = [], []
    for A in dec.factors:
        n = A.shape[0]
        R, piv = linalg.rref(A, field)
        if len(piv) == n:
            bases.append(field.identity(n))
            core.append(field.array(A))
        else:
            bases.append(field.array(A[:, piv]))
            core.append(field.array(R[:len(piv)]))
    return Decomposition(core), bases


# --- Kruskal ---------------------------------------------------------------

@dataclass
class KruskalReport:
    k_ranks: tuple[int, ...]
    bound: Fraction
    r: int

    @property
    def certified(self) -> bool:
        return self.r <= self.bound

    def to_dict(self) -> dict:
        return {"k_ranks": list(self.k_ranks), "bound": float(self.bound),
                "r": self.r, "certified": self.certified}


def k_rank(A, field: Field = QQ) -> int:
    """Largest k such that every k columns of A are linearly independent."""
    A = np.asarray(A)
    n, r = A.shape
    k = 0
    for size in range(1, min(n, r) + 1):
        if all(linalg.rank(A[:, list(cols)], field) == size
               for cols in itertools.combinations(range(r), size)):
            k = size
        else:
            break
    return k


def kruskal_specific(dec: Decomposition, cap: int = 14, field: Field = QQ) -> KruskalReport:
    if len(dec.factors) != 3:
        raise NotApplicable("Kruskal's condition is stated for third-order decompositions")
    if dec.r > cap:
        raise TooLarge(f"r={dec.r} exceeds the subset-enumeration cap {cap}")
    ks = tuple(k_rank(A, field) for A in dec.factors)
    return KruskalReport(ks, Fraction(sum(ks) - 2, 2), dec.r)


# --- the pipeline ----------------------------------------------------------

class SpecificStatus(str, Enum):
    UNIQUE = "unique"
    UNIQUE_ASSUMING_NONSINGULARITY = "unique_assuming_nonsingularity"
    MODULAR_EVIDENCE = "modular_evidence"
    INCONCLUSIVE = "inconclusive"


class Stage(str, Enum):
    COMPRESSION = "compression"
    SMOOTHNESS = "smoothness"
    KERNEL_COUNT = "kernel_count"
    HESSIAN_AT_POINT = "hessian_at_point"


@dataclass
class SpecificConfig:
    p: int | None = None
    rotations: int | None = None     # None: try 1, then 2, then 3
    field: object = "exact"
    skip_smoothness: bool = False
    kruskal: bool = True


@dataclass
class SpecificVerdict:
    status: SpecificStatus
    stage: Stage | None = None
    point: int | None = None
    reason: str = ""
    report: dict = dc_field(default_factory=dict)

    @property
    def unique(self) -> bool:
        return self.status is SpecificStatus.UNIQUE

    def describe(self) -> str:
        text = {
            SpecificStatus.UNIQUE: "Unique",
            SpecificStatus.UNIQUE_ASSUMING_NONSINGULARITY: "Unique assuming nonsingularity",
            SpecificStatus.MODULAR_EVIDENCE: "Unique (modular evidence only)",
            SpecificStatus.INCONCLUSIVE: "Inconclusive",
        }[self.status]
        if self.stage is not None:
            where = self.stage.value + (f"[{self.point}]" if self.point is not None else "")
            text += f" at {where}: {self.reason}"
        return text

    def to_dict(self) -> dict:
        return {"verdict": self.status.value,
                "stage": self.stage.value if self.stage else None,
                "point": self.point, "reason": self.reason,
                "summary": self.describe(), "report": self.report}


def _smoothness(core_tensor, r, config: SpecificConfig, field: Field) -> SmoothnessCertificate:
    if config.rotations is not None:
        return normal_space_image(core_tensor, r, config.p, config.rotations, field)
    cert = None
    for k in (1, 2, 3):
        cert = normal_space_image(core_tensor, r, config.p, k, field)
        if cert.passed or cert.image_dim > cert.target:
            break
    return cert


def check_specific(dec: Decomposition, config: SpecificConfig | None = None) -> SpecificVerdict:
    config = config or SpecificConfig()
    field = field_from_spec(config.field)
    t0 = time.perf_counter()
    report: dict = {"input_shape": list(dec.dims), "r": dec.r, "field": field.name}

    def stop(stage, reason, point=None):
        report["elapsed_s"] = round(time.perf_counter() - t0, 3)
        return SpecificVerdict(SpecificStatus.INCONCLUSIVE, stage, point, reason, report)

    if config.kruskal and len(dec.dims) == 3:
        try:
            report["kruskal"] = kruskal_specific(dec).to_dict()
        except TooLarge as exc:
            report["kruskal"] = {"skipped": str(exc)}

    # (1) compression to the multilinear-rank core
    core, _ = compress(dec, QQ)
    report["multilinear_rank"] = list(core.dims)
    if min(core.dims) < 2:
        return stop(Stage.COMPRESSION, f"multilinear rank {core.dims} has a mode of size < 2")
    core = core.sorted_modes()
    try:
        shape = Shape(core.dims)
    except ValueError as exc:
        return stop(Stage.COMPRESSION, str(exc))
    dq = derive(shape)
    r = dec.r
    ell = dq.ell(r)
    report.update(core_shape=list(shape.dims), Pi=dq.Pi, Sigma=dq.Sigma, ell=ell)
    if ell < 1:
        return stop(Stage.KERNEL_COUNT, f"r={r} leaves no room for hyperplanes (ell={ell})")

    # (2) smoothness of the core tensor on the r-secant variety
    if not config.skip_smoothness:
        if len(shape) != 3:
            return stop(Stage.SMOOTHNESS, "smoothness certificates need a third-order core; "
                        "use skip_smoothness if nonsingularity is known")
        report["applicability"] = applicability_hint(shape, r).status.value
        try:
            cert = _smoothness(core.tensor(field), r, config, field)
        except RankShortfall as exc:
            return stop(Stage.SMOOTHNESS, str(exc))
        except NotApplicable as exc:
            return stop(Stage.SMOOTHNESS, str(exc))
        report["smoothness"] = cert.to_dict()
        if not cert.passed:
            return stop(Stage.SMOOTHNESS, cert.reason)

    # (3) Terracini span at the given points, untrimmed
    points = core.points(field)
    asm = assemble(points, shape, field, trim=False)
    K_T, status = hyperplane_kernel(asm)
    report["T_shape"] = list(asm.T.shape)
    report["kernel_rows"] = int(K_T.shape[0])
    if status is not KernelStatus.OK:
        return stop(Stage.KERNEL_COUNT, f"kernel has {K_T.shape[0]} rows, expected ell={ell}")

    # (4) chart Hessian at every point
    ranks = []
    report["hessian_ranks"] = ranks
    for i, pt in enumerate(points):
        H = point_hessian(K_T, shape, pt, field)
        report.setdefault("hessian_shape", list(H.H.shape))
        report.setdefault("hessian_block_shape", [int(H.sigma), int(H.sigma)])
        rk = linalg.rank(H.H, field)
        ranks.append(rk)
        if rk != dq.Sigma:
            return stop(Stage.HESSIAN_AT_POINT, f"Hessian rank {rk} < Sigma={dq.Sigma}", i)

    report["elapsed_s"] = round(time.perf_counter() - t0, 3)
    if not field.exact:
        status = SpecificStatus.MODULAR_EVIDENCE
    elif config.skip_smoothness:
        status = SpecificStatus.UNIQUE_ASSUMING_NONSINGULARITY
    else:
        status = SpecificStatus.UNIQUE
    return SpecificVerdict(status, reason="all stages passed", report=report)


def load_fixture_555r7() -> Decomposition:
    return Decomposition.load(FIXTURE_555R7)
