"""Generic r-identifiability check over a prime field.

One attempt: sample r points (the first one canonical unless every point
is checked), build the trimmed Terracini matrix, take its left kernel,
stop if the kernel is too large (possible defectivity), then compare the
rank of the stacked Hessian with the target of the applicable case.
Attempts are retried with fresh seeds and finally repeated over a larger
prime.  A full-rank Hessian over GF(q) is full rank over the rationals
too, so a proof at any attempt is final; failures prove nothing.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field as dc_field
from enum import Enum

import numpy as np

from .errors import InvalidRank
from .field import GF, Field
from .hessian import S7Kind, canonical_hessian, classify_s7, hessian_rank, point_hessian
from .segre import ExceptionKind, Shape, derive, exception_lookup
from .tangent import KernelStatus, RankOnePoint, assemble, hyperplane_kernel, sample_points


@dataclass
class GenericConfig:
    prime: int = 127
    retries: int = 3
    escalate_prime: int | None = 8191
    all_points: bool = False
    seed: int = 0
    use_catalog: bool = True

    def __post_init__(self):
        if self.retries < 1:
            raise ValueError("retries must be >= 1")


class VerdictKind(str, Enum):
    PROVED = "proved"
    PROVED_S7A = "proved_s7a"
    INCONCLUSIVE = "inconclusive"
    DEFECTIVE_SUSPECTED = "defective_suspected"
    KNOWN_EXCEPTION = "known_exception"

    @property
    def proved(self) -> bool:
        return self in (VerdictKind.PROVED, VerdictKind.PROVED_S7A)


@dataclass
class Attempt:
    prime: int
    seed: int
    kernel_rows: int
    ell: int
    defective_suspected: bool
    untrimmed_fallback: bool = False
    mode: str | None = None
    target: int | None = None
    ranks: list[int] = dc_field(default_factory=list)
    proved: bool = False


@dataclass
class Verdict:
    kind: VerdictKind
    shape: Shape
    r: int
    prime: int
    seed: int
    attempts: list[Attempt] = dc_field(default_factory=list)
    exception: ExceptionKind | None = None
    elapsed: float = 0.0
    reason: str = ""

    @property
    def n_attempts(self) -> int:
        return len(self.attempts)

    def to_dict(self) -> dict:
        return {
            "shape": list(self.shape.dims),
            "r": self.r,
            "verdict": self.kind.value,
            "exception": self.exception.kind.value if self.exception else None,
            "prime": self.prime,
            "seed": self.seed,
            "attempts": self.n_attempts,
            "elapsed_ms": int(round(self.elapsed * 1000)),
            "reason": self.reason,
            "attempt_log": [asdict(a) for a in self.attempts],
        }


def attempt_seed(seed: int, prime: int, attempt: int) -> int:
    return int(np.random.SeedSequence([seed, prime, attempt]).generate_state(1)[0])


def run_attempt(shape: Shape, r: int, points: list[RankOnePoint], field: Field,
                all_points: bool = False, seed: int = 0) -> Attempt:
    """Steps S2-S7 for fixed points.  ``all_points`` checks the Hessian at every point."""
    prime = getattr(field, "q", 0)
    ell = derive(shape).ell(r)
    asm = assemble(points, shape, field, trim=True)
    K_T, status = hyperplane_kernel(asm)
    fallback = False
    if status is KernelStatus.DEFECTIVE_SUSPECTED:
        # trimming is only generically span-preserving
        K_T, status = hyperplane_kernel(assemble(points, shape, field, trim=False))
        fallback = True
    att = Attempt(prime=prime, seed=seed, kernel_rows=K_T.shape[0], ell=ell,
                  defective_suspected=status is KernelStatus.DEFECTIVE_SUSPECTED,
                  untrimmed_fallback=fallback)
    if att.defective_suspected:
        return att
    mode = classify_s7(shape, ell)
    att.mode, att.target = mode.kind.value, mode.target
    if all_points:
        hessians = [point_hessian(K_T, shape, p, field) for p in points]
    else:
        hessians = [canonical_hessian(K_T, shape, field)]
    for H in hessians:
        att.ranks.append(hessian_rank(H, field))
        if att.ranks[-1] != mode.target:
            break
    att.proved = len(att.ranks) == len(hessians) and all(rk == mode.target for rk in att.ranks)
    return att


def check_generic(shape: Shape, r: int | None = None, config: GenericConfig | None = None) -> Verdict:
    config = config or GenericConfig()
    dq = derive(shape)
    r = dq.rbar if r is None else int(r)
    if not 1 <= r <= dq.rbar:
        raise InvalidRank(f"r={r} outside 1..{dq.rbar} for shape {shape}")
    t0 = time.perf_counter()
    if config.use_catalog:
        exc = exception_lookup(shape, r)
        if exc is not None:
            return Verdict(VerdictKind.KNOWN_EXCEPTION, shape, r, config.prime, config.seed,
                           exception=exc, elapsed=time.perf_counter() - t0,
                           reason=f"known exception: {exc}")
    primes = [config.prime]
    if config.escalate_prime and config.escalate_prime != config.prime:
        primes.append(config.escalate_prime)
    attempts: list[Attempt] = []
    for q in primes:
        field = GF(q)
        for k in range(config.retries):
            s = attempt_seed(config.seed, q, k)
            points = sample_points(shape, r, s, field, canonical_first=not config.all_points)
            att = run_attempt(shape, r, points, field, config.all_points, seed=s)
            attempts.append(att)
            if att.proved:
                kind = (VerdictKind.PROVED_S7A if att.mode == S7Kind.WEAKLY_DEFECTIVE.value
                        else VerdictKind.PROVED)
                return Verdict(kind, shape, r, q, config.seed, attempts,
                               elapsed=time.perf_counter() - t0,
                               reason=f"Hessian rank {att.ranks[-1]} = target {att.target}")
    elapsed = time.perf_counter() - t0
    if all(a.defective_suspected for a in attempts):
        return Verdict(VerdictKind.DEFECTIVE_SUSPECTED, shape, r, primes[-1], config.seed,
                       attempts, elapsed=elapsed,
                       reason="kernel of T larger than ell in every attempt: "
                       + ", ".join(f"{a.kernel_rows}>{a.ell}" for a in attempts))
    observed = [f"GF({a.prime}):" + ("defect" if a.defective_suspected else f"{a.ranks}/{a.target}")
                for a in attempts]
    return Verdict(VerdictKind.INCONCLUSIVE, shape, r, primes[-1], config.seed, attempts,
                   elapsed=elapsed, reason="Hessian never reached target; ranks " + "; ".join(observed))
