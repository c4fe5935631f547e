"""Time the numba kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--quick] [--repeat N]``.
Both backends are imported side by side; numba compile time is excluded by
a warm-up call. Each row reports the best of ``--repeat`` runs.
"""

import argparse
import time

import numpy as np

from kaczmarz_tanabe.kernels import numba_backend, numpy_backend
from kaczmarz_tanabe.linalg import compute_H, row_norms_squared
from kaczmarz_tanabe.problems import ScanGeometry, build_projection_matrix, strip_zero_rows, tomo_problem


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(quick):
    g = ScanGeometry(12, 17, 16) if quick else ScanGeometry(36, 75, 50)
    p = strip_zero_rows(tomo_problem(g))
    A = p.A
    m, n = A.shape
    norms = row_norms_squared(A)
    order = np.concatenate([np.arange(m), np.arange(m - 2, 0, -1)]).astype(np.int64)
    x = np.zeros(n)
    H = compute_H(A[: (200 if quick else 1200)])
    thetas = np.repeat(g.angles(), g.n_rays)
    offsets = np.tile(g.offsets(), g.n_angles)
    return [
        (f"symmetric sweep {m}x{n}", lambda k: k.sweep(A, p.b, x, order, norms)),
        (f"forward elimination {H.shape[0]}", lambda k: k.forward_elimination(H)),
        (f"backward elimination {H.shape[0]}", lambda k: k.backward_elimination(H)),
        (f"trace rays {g.m} on {g.grid}x{g.grid}", lambda k: k.trace_rays(g.grid, thetas, offsets)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="desk-sized inputs")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    print(f"{'kernel':<36}{'numpy [s]':>12}{'numba [s]':>12}{'speed-up':>10}")
    for name, run in cases(args.quick):
        run(numba_backend)  # compile
        t_np = best_of(lambda: run(numpy_backend), args.repeat)
        t_nb = best_of(lambda: run(numba_backend), args.repeat)
        print(f"{name:<36}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
