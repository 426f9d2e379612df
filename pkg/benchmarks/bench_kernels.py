"""Compare the numba and numpy prime-field kernels.

Run ``python3 benchmarks/bench_kernels.py``. Both backends are called
directly, so the result does not depend on ``QQW_NO_NUMBA``. Outputs are
checked for equality before timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qqw import _kernels as K


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    parser.add_argument("--p", type=int, default=7)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    if K.matmul_mod_numba is None:
        raise SystemExit("numba is not installed")
    rng = np.random.default_rng(0)
    p = args.p
    pn, chunk = np.int64(p), np.int64(K._chunk(p))
    print(f"{'kernel':<8}{'n':>6}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for n in args.sizes:
        a = rng.integers(0, p, (n, n), dtype=np.int64)
        b = rng.integers(0, p, (n, n), dtype=np.int64)
        # warm up the JIT and check agreement
        assert np.array_equal(K.matmul_mod_numba(a, b, pn, chunk), K.matmul_mod_numpy(a, b, p))
        r1, p1 = K.rref_mod_numba(a, pn)
        r2, p2 = K.rref_mod_numpy(a, p)
        assert np.array_equal(r1, r2) and np.array_equal(p1, p2)
        for name, fnp, fnb in (
            ("matmul", lambda: K.matmul_mod_numpy(a, b, p), lambda: K.matmul_mod_numba(a, b, pn, chunk)),
            ("rref", lambda: K.rref_mod_numpy(a, p), lambda: K.rref_mod_numba(a, pn)),
        ):
            tn, tb = best_of(fnp, args.repeats), best_of(fnb, args.repeats)
            print(f"{name:<8}{n:>6}{tn:>12.4f}{tb:>12.4f}{tn / tb:>10.1f}")


if __name__ == "__main__":
    main()
