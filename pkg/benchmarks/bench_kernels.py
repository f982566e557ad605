"""Benchmark the hot kernels on the numba and numpy backends.

Times the three kernels that dominate package runtime on representative
workloads and prints a comparison table. Numba timings exclude JIT
compilation (an untimed warmup call precedes measurement).

Usage:
    python benchmarks/bench_kernels.py [--repeats 5]
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np


def _workloads():
    from sepkit.product_opt import grid_extremize, seesaw_extremize
    from sepkit.states import haar_product_locals_batch
    from sepkit.upb import builtin_upb, span_projector
    from sepkit._kernels import product_form_batch

    span = span_projector(builtin_upb("shifts"))
    rng = np.random.default_rng(0)
    batch = haar_product_locals_batch((2, 2, 2), 100_000, rng)

    return [
        (
            "grid scan 3 qubits (16^2 lattice, 3 refinements)",
            lambda: grid_extremize(span, (2, 2, 2), "min", grid_points=16, refine_levels=3),
        ),
        (
            "seesaw 3 qubits (64 restarts)",
            lambda: seesaw_extremize(span, (2, 2, 2), "min", restarts=64, seed=0),
        ),
        (
            "batched product form (100k states, dim 8)",
            lambda: product_form_batch(batch, span),
        ),
    ]


def _time(fn, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5, help="timed repetitions (best taken)")
    args = parser.parse_args()

    from sepkit import _backend

    backends = ["numpy"] + (["numba"] if _backend.HAVE_NUMBA else [])
    results: dict[str, dict[str, float]] = {}
    for backend in backends:
        os.environ["SEPKIT_BACKEND"] = backend
        assert _backend.active_backend() == backend
        for name, fn in _workloads():
            fn()  # warmup (JIT compile on the numba path, cache touch on numpy)
            results.setdefault(name, {})[backend] = _time(fn, args.repeats)

    width = max(len(name) for name in results)
    header = f"{'kernel'.ljust(width)}  {'numpy':>10}"
    if "numba" in backends:
        header += f"  {'numba':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, times in results.items():
        line = f"{name.ljust(width)}  {times['numpy'] * 1e3:>8.1f}ms"
        if "numba" in times:
            line += f"  {times['numba'] * 1e3:>8.1f}ms  {times['numpy'] / times['numba']:>7.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
