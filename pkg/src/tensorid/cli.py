"""Command-line front end: ``tensorid {generic,specific,sweep,table,expected-rank}``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import InvalidRank, TensorIdError
from .field import is_prime
from .generic import GenericConfig, VerdictKind, check_generic
from .segre import Shape, derive, exception_lookup, kruskal_generic_bound
from .specific import (Decomposition, DecompositionFormatError, SpecificConfig, SpecificStatus,
                       check_specific)
from .sweep import SweepConfig, run_sweep

EXIT_OK = 0
EXIT_INCONCLUSIVE = 2
EXIT_NEGATIVE = 3
EXIT_USAGE = 64
EXIT_DATAERR = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _shape(text: str) -> Shape:
    try:
        return Shape.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _prime(text: str) -> int:
    q = int(text)
    if not is_prime(q) or q >= 65536:
        raise argparse.ArgumentTypeError(f"{q} is not a prime below 65536")
    return q


def _span(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from exc
    if a < 2 or b < a:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return a, b


def _emit(obj, as_json: bool, text: str):
    print(json.dumps(obj, indent=2, default=str) if as_json else text)


def _default_seed() -> int:
    return int(os.environ.get("TENSORID_SEED", "0"))


# --- generic ---------------------------------------------------------------

def generic_exit_code(kind: VerdictKind) -> int:
    if kind.proved:
        return EXIT_OK
    if kind is VerdictKind.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_NEGATIVE


def cmd_generic(args) -> int:
    cfg = GenericConfig(prime=args.prime, retries=args.retries, all_points=args.all_points,
                        seed=args.seed, use_catalog=not args.no_catalog,
                        escalate_prime=None if args.no_escalate else 8191)
    try:
        v = check_generic(args.shape, args.rank, cfg)
    except InvalidRank as exc:
        raise UsageError(str(exc)) from exc
    dq = derive(args.shape)
    lines = [f"shape {args.shape}  Pi={dq.Pi}  Sigma={dq.Sigma}  rbar={dq.rbar}"
             + ("  (perfect)" if dq.perfect else ""),
             f"r={v.r}: {v.kind.value}  [{v.reason}]",
             f"prime={v.prime} attempts={v.n_attempts} elapsed={v.elapsed:.3f}s"]
    _emit(v.to_dict(), args.json, "\n".join(lines))
    return generic_exit_code(v.kind)


# --- specific --------------------------------------------------------------

def cmd_specific(args) -> int:
    try:
        dec = Decomposition.load(args.input)
    except (DecompositionFormatError, OSError) as exc:
        print(f"tensorid: cannot read decomposition: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    cfg = SpecificConfig(p=args.p, rotations=args.rotations,
                         field=args.prime if args.prime else "exact",
                         skip_smoothness=args.skip_smoothness)
    v = check_specific(dec, cfg)
    rep = v.report
    lines = [f"input shape {tuple(rep['input_shape'])}, r={rep['r']}, field {rep['field']}"]
    if "core_shape" in rep:
        lines.append(f"core shape {tuple(rep['core_shape'])}: Pi={rep['Pi']} Sigma={rep['Sigma']} "
                     f"ell={rep['ell']}")
    if "kruskal" in rep and "k_ranks" in rep["kruskal"]:
        k = rep["kruskal"]
        lines.append(f"Kruskal: k-ranks {tuple(k['k_ranks'])}, bound {k['bound']} -> "
                     + ("certified" if k["certified"] else "not certified"))
    if "smoothness" in rep:
        s = rep["smoothness"]
        lines.append(f"smoothness (p={s['p']}, rotations {s['rotations']}): flattening rank "
                     f"{s['flattening_rank']}, kernel {s['kernel_dim']}, cokernel "
                     f"{s['cokernel_dim']}, image {s['image_dim']} / {s['target']} -> {s['label']}")
    if "T_shape" in rep:
        lines.append(f"T {rep['T_shape'][0]}x{rep['T_shape'][1]}, kernel rows {rep['kernel_rows']}")
    if rep.get("hessian_ranks"):
        hs = rep.get("hessian_shape", ["?", "?"])
        lines.append(f"Hessians {hs[0]}x{hs[1]}, ranks {rep['hessian_ranks']}")
    lines.append(f"verdict: {v.describe()}")
    _emit(v.to_dict(), args.json, "\n".join(lines))
    return EXIT_OK if v.status is SpecificStatus.UNIQUE else EXIT_INCONCLUSIVE


# --- sweep -----------------------------------------------------------------

def cmd_sweep(args) -> int:
    cfg = SweepConfig(max_pi=args.max_pi, out_path=args.out, max_order=args.max_order,
                      jobs=args.jobs, resume=not args.no_resume,
                      generic=GenericConfig(prime=args.prime, retries=args.retries,
                                            seed=args.seed, use_catalog=not args.no_catalog))
    progress = None
    if args.verbose:
        def progress(rec):
            print(f"{tuple(rec['shape'])} r={rec['r']}: {rec['verdict']}", file=sys.stderr)
    summary = run_sweep(cfg, progress)
    d = summary.to_dict()
    text = "\n".join([f"shapes {d['total']}  computed {d['computed']}  skipped {d['skipped']}"]
                     + [f"  {k}: {n}" for k, n in d["by_verdict"].items()])
    _emit(d, args.json, text)
    return EXIT_OK


# --- table -----------------------------------------------------------------

@dataclass
class TableRow:
    m: int
    n: int
    shape: tuple[int, ...]
    rbar: int
    max_proved: int
    perfect: bool
    kruskal: int | None
    exception: str | None = None


def table_cell(m: int, n: int, seed: int = 0) -> TableRow:
    shape = Shape.normalized((m, n, n))
    dq = derive(shape)
    cfg = GenericConfig(seed=seed, use_catalog=False)
    best = 0
    for r in range(dq.rbar, 0, -1):
        if check_generic(shape, r, cfg).kind.proved:
            best = r
            break
    exc = exception_lookup(shape, dq.rbar)
    return TableRow(m, n, shape.dims, dq.rbar, best, dq.perfect, kruskal_generic_bound(shape),
                    exc.kind.value if exc else None)


def build_table(rows, cols, jobs: int = 1, seed: int = 0) -> list[TableRow]:
    cells = [(m, n) for m in range(rows[0], rows[1] + 1) for n in range(cols[0], cols[1] + 1)]
    if jobs <= 1:
        return [table_cell(m, n, seed) for m, n in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(table_cell, [c[0] for c in cells], [c[1] for c in cells],
                             [seed] * len(cells)))


def format_table(table: list[TableRow], rows, cols) -> str:
    by = {(t.m, t.n): t for t in table}
    ns = range(cols[0], cols[1] + 1)
    head = "m \\ n " + "".join(f"{n:>12}" for n in ns)
    out = [head, "-" * len(head)]
    for m in range(rows[0], rows[1] + 1):
        cells = []
        for n in ns:
            t = by[(m, n)]
            mark = "*" if t.perfect and t.max_proved == t.rbar else " "
            cells.append(f"{t.max_proved:>5}{mark} K={t.kruskal:<3}")
        out.append(f"{m:<6}" + "".join(f"{c:>12}" for c in cells))
    out.append("")
    out.append("entry: largest r proved for shape (m,n,n) sorted; K = Kruskal generic bound;")
    out.append("* = perfect shape, the proved value equals rbar and cannot be improved")
    return "\n".join(out)


def cmd_table(args) -> int:
    table = build_table(args.rows, args.cols, args.jobs, args.seed)
    _emit([vars(t) | {"shape": list(t.shape)} for t in table], args.json,
          format_table(table, args.rows, args.cols))
    return EXIT_OK


# --- expected-rank ---------------------------------------------------------

def cmd_expected_rank(args) -> int:
    dq = derive(args.shape)
    d = {"shape": list(args.shape.dims), "Pi": dq.Pi, "Sigma": dq.Sigma, "rbar": dq.rbar,
         "perfect": dq.perfect}
    try:
        d["kruskal_generic_bound"] = kruskal_generic_bound(args.shape)
    except TensorIdError:
        d["kruskal_generic_bound"] = None
    exc = exception_lookup(args.shape, dq.rbar)
    d["exception_at_rbar"] = exc.kind.value if exc else None
    text = (f"shape {args.shape}: Pi={dq.Pi} Sigma={dq.Sigma} rbar={dq.rbar}"
            + (" perfect" if dq.perfect else "")
            + (f" Kruskal={d['kruskal_generic_bound']}" if d["kruskal_generic_bound"] else "")
            + (f" [exception at rbar: {d['exception_at_rbar']}]" if exc else ""))
    _emit(d, args.json, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tensorid", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generic", help="generic r-identifiability of a shape")
    g.add_argument("--shape", type=_shape, required=True, help="comma-separated sizes, e.g. 5,5,5")
    g.add_argument("--rank", type=int, default=None, help="rank to test (default: rbar)")
    g.add_argument("--prime", type=_prime, default=127)
    g.add_argument("--retries", type=int, default=3)
    g.add_argument("--all-points", action="store_true", help="check the Hessian at every point")
    g.add_argument("--seed", type=int, default=_default_seed())
    g.add_argument("--no-catalog", action="store_true", help="run the algorithm on known exceptions too")
    g.add_argument("--no-escalate", action="store_true", help="do not retry over GF(8191)")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_generic)

    s = sub.add_parser("specific", help="uniqueness of a given decomposition")
    s.add_argument("--input", required=True, help="decomposition JSON file")
    fld = s.add_mutually_exclusive_group()
    fld.add_argument("--exact", action="store_true", help="rational arithmetic (default)")
    fld.add_argument("--prime", type=_prime, default=None, help="fast modular pre-screen")
    s.add_argument("--p", type=int, default=None, help="Young flattening degree")
    s.add_argument("--rotations", type=int, choices=(1, 2, 3), default=None)
    s.add_argument("--skip-smoothness", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_specific)

    w = sub.add_parser("sweep", help="generic check at rbar for all shapes up to a size")
    w.add_argument("--max-pi", type=int, required=True)
    w.add_argument("--max-order", type=int, default=None)
    w.add_argument("--out", default="sweep.jsonl")
    w.add_argument("--jobs", type=int, default=1)
    w.add_argument("--no-resume", action="store_true")
    w.add_argument("--prime", type=_prime, default=127)
    w.add_argument("--retries", type=int, default=3)
    w.add_argument("--seed", type=int, default=_default_seed())
    w.add_argument("--no-catalog", action="store_true")
    w.add_argument("--verbose", action="store_true")
    w.add_argument("--json", action="store_true")
    w.set_defaults(func=cmd_sweep)

    t = sub.add_parser("table", help="largest provable rank for shapes (m,n,n)")
    t.add_argument("--rows", type=_span, required=True, help="m range a..b")
    t.add_argument("--cols", type=_span, required=True, help="n range c..d")
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--seed", type=int, default=_default_seed())
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_table)

    e = sub.add_parser("expected-rank", help="derived quantities of a shape")
    e.add_argument("--shape", type=_shape, required=True)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_expected_rank)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tensorid: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"tensorid: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
