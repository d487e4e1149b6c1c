"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5]

Outputs are compared before timing; a mismatch aborts the run.
"""
import argparse
import time

import numpy as np

from dmiat import _kernels


def _best(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def cases(rng):
    n = 5000
    vals = np.sort(rng.integers(0, 800, n).astype(np.float64))
    labs = rng.integers(0, 6, n).astype(np.int64)
    base = float(np.mean(labs == 2))
    yield ("scan_prefix lift", "scan_prefix",
           (labs, vals, 2, 6, _kernels.KIND_LIFT, 1.5, base, 500, 500))
    yield ("scan_prefix entropy", "scan_prefix",
           (labs, vals, 2, 6, _kernels.KIND_ENTROPY, 0.5, 1.0, 500, 0))
    yield ("best_split", "best_split", (labs, vals, 0, n, 6))
    train = rng.random((2000, 20))
    test = rng.random((500, 20))
    yield ("knn_predict", "knn_predict", (train, rng.integers(0, 6, 2000).astype(np.int64), test, 3, 6))


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    if not _kernels.HAS_NUMBA:
        raise SystemExit("numba is unavailable or disabled; nothing to compare")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<22}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for label, name, fargs in cases(rng):
        fast = getattr(_kernels, f"{name}_numba")
        slow = getattr(_kernels, f"{name}_numpy")
        a, b = slow(*fargs), fast(*fargs)
        if not all(np.array_equal(x, y, equal_nan=True) for x, y in zip(np.atleast_1d(a), np.atleast_1d(b))):
            raise SystemExit(f"{label}: numpy and numba disagree")
        t_np = _best(slow, fargs, args.repeat)
        t_nb = _best(fast, fargs, args.repeat)
        print(f"{label:<22}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
