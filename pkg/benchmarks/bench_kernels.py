"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N] [--sizes 10 30 60]

The first numba call compiles (or loads the on-disk cache); it is done once
before timing and reported separately. Every timed pair is also checked for
agreement so a fast but wrong kernel shows up here too.
"""

import argparse
import time
import timeit

import numpy as np

from energybounds import kernels
from energybounds._jit import HAVE_NUMBA
from energybounds.graphs import complete, random_connected_graph


def _best(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10_000:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def _cases(n, rng):
    g = random_connected_graph(n, min(1.0, 6.0 / n), rng)
    adj = g.adjacency_array()
    a = adj.astype(float)
    tol = kernels.jacobi_off_tol(n, float(np.sqrt(np.sum(a * a))))
    dense = complete(n).adjacency_array().astype(float)
    return {
        "jacobi": (
            lambda jit: kernels.jacobi_eigenvalues(a, tol, jit=jit),
            lambda x, y: np.allclose(np.sort(x[0]), np.sort(y[0]), atol=1e-10),
        ),
        "gamma": (
            lambda jit: kernels.gamma_iterate(adj, 200, 1e-10, jit=jit),
            lambda x, y: np.allclose(x, y, rtol=1e-12),
        ),
        # a clique has no witness, so both passes visit every triple
        "triple_scan": (
            lambda jit: kernels.triple_scan(dense, jit=jit),
            lambda x, y: x[:4] == y[:4],
        ),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 30, 60])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy path can be timed")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<12} {'n':>4} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8}  agree")
    for n in args.sizes:
        for name, (run, same) in _cases(n, rng).items():
            ref = run(False)
            t_np = _best(lambda: run(False), args.repeat)
            if HAVE_NUMBA:
                t0 = time.perf_counter()
                got = run(True)
                warm = time.perf_counter() - t0
                t_jit = _best(lambda: run(True), args.repeat)
                agree = same(ref, got)
                print(f"{name:<12} {n:>4} {t_np * 1e3:>12.3f} {t_jit * 1e3:>12.3f} {t_np / t_jit:>7.1f}x  {agree}"
                      f"  (first call {warm * 1e3:.0f} ms)")
            else:
                print(f"{name:<12} {n:>4} {t_np * 1e3:>12.3f} {'-':>12} {'-':>8}  -")


if __name__ == "__main__":
    main()
