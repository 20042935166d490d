"""Compare the compiled and numpy GF(q) elimination kernels.

    python benchmarks/bench_echelon.py --sizes 100 200 400 --prime 8191
    python benchmarks/bench_echelon.py --workload    # Terracini matrices from real checks
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from tensorid._modp_py import echelon_modp as echelon_py
from tensorid.field import GF
from tensorid.segre import Shape, derive
from tensorid.tangent import assemble, sample_points

try:
    from tensorid._modp import echelon_modp as echelon_cy
except ImportError:
    echelon_cy = None


def time_kernel(kernel, A, q, col_limit, repeats):
    times = []
    for _ in range(repeats):
        B = A.copy()
        t0 = time.perf_counter()
        piv = kernel(B, q, col_limit, False)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), len(piv)


def augmented_terracini(shape: Shape, q: int, seed: int) -> tuple[np.ndarray, int]:
    F = GF(q)
    r = derive(shape).rbar
    T = assemble(sample_points(shape, r, seed, F, canonical_first=True), shape, F).T
    m, n = T.shape
    Y = np.zeros((m, n + m), dtype=np.int64)
    Y[:, :n] = T
    Y[:, n:] = np.eye(m, dtype=np.int64)
    return Y, n


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 384])
    ap.add_argument("--prime", type=int, default=8191)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workload", action="store_true", help="time [T | I] reductions instead")
    args = ap.parse_args(argv)

    if echelon_cy is None:
        print("compiled kernel not available; build with `pip install -e . --no-build-isolation`")
    rng = np.random.default_rng(args.seed)
    q = args.prime
    if args.workload:
        cases = []
        for dims in [(5, 5, 5), (6, 6, 6), (8, 3, 3, 2), (7, 7, 7)]:
            Y, n = augmented_terracini(Shape(dims), q, args.seed)
            cases.append((f"[T|I] {dims}", Y, n))
    else:
        cases = [(f"random {s}x{s}", rng.integers(0, q, size=(s, s), dtype=np.int64), s)
                 for s in args.sizes]

    print(f"{'case':<28}{'rows x cols':>14}{'numpy [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for name, A, col_limit in cases:
        t_py, r_py = time_kernel(echelon_py, A, q, col_limit, args.repeats)
        if echelon_cy is not None:
            t_cy, r_cy = time_kernel(echelon_cy, A, q, col_limit, args.repeats)
            assert r_cy == r_py, "kernels disagree on rank"
            extra = f"{t_cy:>12.4f}{t_py / t_cy:>9.1f}x"
        else:
            extra = f"{'-':>12}{'-':>10}"
        shape = f"{A.shape[0]}x{A.shape[1]}"
        print(f"{name:<28}{shape:>14}{t_py:>12.4f}{extra}")


if __name__ == "__main__":
    main()
