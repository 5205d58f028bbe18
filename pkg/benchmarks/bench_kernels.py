"""Benchmark the compiled quaternion matmul kernel against the numpy
fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 16,32,64,128] [--reps 5]

Also times the block reconstruction path (U diag(sigma) V^H) through
each backend, since that is the kernel's main consumer during
decompression.
"""

import argparse
import time

import numpy as np

from quatimg._kernels_py import qmatmul as qmatmul_numpy

try:
    from quatimg._kernels import qmatmul as qmatmul_compiled
except ImportError:
    qmatmul_compiled = None


def _time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_matmul(n, reps):
    rng = np.random.default_rng(0)
    a = np.ascontiguousarray(rng.standard_normal((n, n, 4)))
    b = np.ascontiguousarray(rng.standard_normal((n, n, 4)))
    rows = [("numpy", _time(lambda: qmatmul_numpy(a, b), reps))]
    if qmatmul_compiled is not None:
        rows.append(("compiled",
                     _time(lambda: np.asarray(qmatmul_compiled(a, b)), reps)))
    return rows


def bench_reconstruct(n, t, reps):
    rng = np.random.default_rng(1)
    u = np.ascontiguousarray(rng.standard_normal((n, t, 4)))
    v = np.ascontiguousarray(rng.standard_normal((t, n, 4)))
    rows = [("numpy", _time(lambda: qmatmul_numpy(u, v), reps))]
    if qmatmul_compiled is not None:
        rows.append(("compiled",
                     _time(lambda: np.asarray(qmatmul_compiled(u, v)), reps)))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="16,32,64,128")
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if qmatmul_compiled is None:
        print("compiled kernel not available; numpy numbers only\n")

    print(f"{'op':<24}{'n':>6}  " + "".join(f"{name:>12}"
          for name in ("numpy", "compiled")))
    for n in sizes:
        rows = dict(bench_matmul(n, args.reps))
        line = f"{'qmatmul n x n':<24}{n:>6}  "
        line += f"{rows['numpy'] * 1e3:>10.3f}ms"
        if "compiled" in rows:
            speedup = rows["numpy"] / rows["compiled"]
            line += f"{rows['compiled'] * 1e3:>10.3f}ms  ({speedup:.2f}x)"
        print(line)
    for n in sizes:
        t = max(1, n // 8)
        rows = dict(bench_reconstruct(n, t, args.reps))
        line = f"{'reconstruct t = n/8':<24}{n:>6}  "
        line += f"{rows['numpy'] * 1e3:>10.3f}ms"
        if "compiled" in rows:
            speedup = rows["numpy"] / rows["compiled"]
            line += f"{rows['compiled'] * 1e3:>10.3f}ms  ({speedup:.2f}x)"
        print(line)


if __name__ == "__main__":
    main()
