"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

The first numba call includes compilation and is reported separately.
"""

import argparse
import time

import numpy as np

from pfaffrig import kernels
from pfaffrig._accel import HAVE_NUMBA

P = 10007


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    # shapes roughly like the Macaulay blocks of an F4 run and a point scan
    mat = rng.integers(0, P, size=(300, 400), dtype=np.int64)
    exps = rng.integers(0, 6, size=(120, 7), dtype=np.int64)
    pts = rng.integers(0, P, size=(2000, 7), dtype=np.int64)
    return [
        ("rref_mod_p 300x400", lambda: kernels.rref_mod_p_numpy(mat, P), lambda: kernels.rref_mod_p_numba(mat, P)),
        ("eval_monomials 2000x120", lambda: kernels.eval_monomials_numpy(exps, pts, P),
         lambda: kernels.eval_monomials_numba(exps, pts, P)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return
    rng = np.random.default_rng(args.seed)
    print("%-26s %10s %10s %10s %8s" % ("kernel", "numpy", "numba-1st", "numba", "speedup"))
    for name, f_np, f_nb in cases(rng):
        a, b = f_np(), f_nb()
        same = all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in zip(a, b)) \
            if isinstance(a, tuple) else np.array_equal(a, b)
        assert same, "kernels disagree on " + name
        t0 = time.perf_counter()
        f_nb()
        first = time.perf_counter() - t0
        t_np = best_of(f_np, args.repeat)
        t_nb = best_of(f_nb, args.repeat)
        print("%-26s %9.4fs %9.4fs %9.4fs %7.1fx" % (name, t_np, first, t_nb, t_np / t_nb))


if __name__ == "__main__":
    main()
