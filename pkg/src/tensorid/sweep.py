"""Batch runs of the generic check over every shape below a size bound."""
from __future__ import annotations

import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Iterator

import numpy as np

from .generic import GenericConfig, VerdictKind, check_generic
from .segre import Shape


def enumerate_shapes(max_pi: int, max_order: int | None = None) -> Iterator[Shape]:
    """All non-increasing shapes with at least three modes of size >= 2 and product <= max_pi.

    Shapes come in lexicographic order of their dimension tuples.
    """
    if max_pi < 8:
        raise ValueError("max_pi must be at least 8")
    limit = max_order if max_order is not None else max_pi.bit_length()
    found: list[tuple[int, ...]] = []

    def extend(prefix: tuple[int, ...], prod: int):
        if len(prefix) >= 3:
            found.append(prefix)
        if len(prefix) == limit:
            return
        top = prefix[-1] if prefix else max_pi
        for n in range(2, top + 1):
            if prod * n > max_pi:
                break
            extend(prefix + (n,), prod * n)

    extend((), 1)
    for dims in sorted(found):
        yield Shape(dims)


def shape_seed(seed: int, dims) -> int:
    return int(np.random.SeedSequence([seed, len(dims), *dims]).generate_state(1)[0])


METHOD = {
    VerdictKind.PROVED: "S7b",
    VerdictKind.PROVED_S7A: "S7a",
    VerdictKind.KNOWN_EXCEPTION: "exception",
    VerdictKind.DEFECTIVE_SUSPECTED: "defect",
    VerdictKind.INCONCLUSIVE: "none",
}


@dataclass
class SweepConfig:
    max_pi: int
    out_path: str | os.PathLike | None = None
    max_order: int | None = None
    jobs: int = 1
    resume: bool = True
    generic: GenericConfig = dc_field(default_factory=GenericConfig)


@dataclass
class SweepSummary:
    total: int = 0
    computed: int = 0
    skipped: int = 0
    by_verdict: Counter = dc_field(default_factory=Counter)
    by_method: Counter = dc_field(default_factory=Counter)
    records: list[dict] = dc_field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {"total": self.total, "computed": self.computed, "skipped": self.skipped,
                "by_verdict": dict(sorted(self.by_verdict.items())),
                "by_method": dict(sorted(self.by_method.items()))}


def sweep_record(shape: Shape, config: GenericConfig) -> dict:
    cfg = GenericConfig(**{**vars(config), "seed": shape_seed(config.seed, shape.dims)})
    v = check_generic(shape, None, cfg)
    return {
        "shape": list(shape.dims),
        "r": v.r,
        "verdict": v.kind.value,
        "exception": v.exception.kind.value if v.exception else None,
        "method": METHOD[v.kind],
        "prime": v.prime,
        "seed": v.seed,
        "attempts": v.n_attempts,
        "elapsed_ms": int(round(v.elapsed * 1000)),
    }


def read_records(path) -> list[dict]:
    """Valid records of a JSONL file; a truncated last line is ignored."""
    p = Path(path)
    if not p.exists():
        return []
    out = []
    for line in p.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            out.append(json.loads(line))
        except json.JSONDecodeError:
            continue
    return out


def _drop_partial_line(path) -> None:
    """Cut an unterminated last line left by an interrupted writer."""
    p = Path(path)
    if not p.exists():
        return
    data = p.read_bytes()
    if data and not data.endswith(b"\n"):
        with open(p, "r+b") as fh:
            fh.truncate(data.rfind(b"\n") + 1)


def run_sweep(config: SweepConfig, progress=None) -> SweepSummary:
    shapes = list(enumerate_shapes(config.max_pi, config.max_order))
    summary = SweepSummary(total=len(shapes))
    done: dict[tuple, dict] = {}
    if config.out_path is not None and config.resume:
        for rec in read_records(config.out_path):
            done.setdefault(tuple(rec["shape"]), rec)
    todo = [s for s in shapes if tuple(s.dims) not in done]
    wanted = {tuple(s.dims) for s in shapes}
    for key, rec in done.items():
        if key in wanted:
            summary.skipped += 1
            summary.records.append(rec)

    fh = None
    if config.out_path is not None:
        Path(config.out_path).parent.mkdir(parents=True, exist_ok=True)
        if config.resume:
            _drop_partial_line(config.out_path)
        fh = open(config.out_path, "a" if config.resume else "w")

    def write(rec):
        summary.records.append(rec)
        summary.computed += 1
        if fh is not None:
            fh.write(json.dumps(rec) + "\n")
            fh.flush()
        if progress is not None:
            progress(rec)

    try:
        if config.jobs <= 1:
            for s in todo:
                write(sweep_record(s, config.generic))
        else:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                futs = [pool.submit(sweep_record, s, config.generic) for s in todo]
                for fut in as_completed(futs):
                    write(fut.result())
    finally:
        if fh is not None:
            fh.close()

    for rec in summary.records:
        summary.by_verdict[rec["verdict"]] += 1
        summary.by_method[rec.get("method", METHOD[VerdictKind(rec["verdict"])])] += 1
    return summary
