"""Compare the numba and numpy kernel backends.

Times Gram construction, a fixed-budget AGD solve, and full Matrix SVM
versus Binary-Relevance fits on a dense 500 x 72 x 6 multilabel problem.
Each measurement is the median of several runs after one discarded warm-up,
so numba compilation is excluded.

Usage::

    python benchmarks/bench_backends.py [--n 500] [--repeats 5]
"""

import argparse
import statistics
import time

import numpy as np

from matsvm import (
    DualProblem,
    KernelSpec,
    SolverOptions,
    agd_solve,
    fit_br_svm,
    fit_matrix_svm,
    gram,
    normalize_features,
)
from matsvm import _backend


def make_problem(n, d, m, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, d))
    s = x @ rng.standard_normal((d, m)) / np.sqrt(d) + 0.5 * rng.standard_normal((n, m)) - 0.5
    return normalize_features(x), np.where(s > 0, 1.0, -1.0)


def median_time(fn, repeats):
    fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--d", type=int, default=72)
    ap.add_argument("--m", type=int, default=6)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    x, y = make_problem(args.n, args.d, args.m, args.seed)
    spec = KernelSpec.rbf(0.3)
    fixed = SolverOptions(tol=1e-300, max_iter=200)
    rows = []
    for name in _backend.available():
        with _backend.use_backend(name):
            kbar = gram(x, x, spec) + 1.0
            prob = DualProblem(kbar, y)
            rows.append(
                (
                    name,
                    median_time(lambda: gram(x, x, spec), args.repeats),
                    median_time(lambda: agd_solve(prob, fixed), args.repeats),
                    median_time(lambda: fit_matrix_svm(x, y, spec), args.repeats),
                    median_time(lambda: fit_br_svm(x, y, spec), args.repeats),
                )
            )

    print(f"problem: n={args.n} d={args.d} m={args.m}, RBF p=0.3, median of {args.repeats}")
    print(f"{'backend':<8} {'gram s':>10} {'agd200 s':>10} {'matrix s':>10} {'BR s':>10} {'BR/matrix':>10}")
    for name, tg, ta, tm, tb in rows:
        print(f"{name:<8} {tg:10.4f} {ta:10.4f} {tm:10.4f} {tb:10.4f} {tb / tm:10.2f}")


if __name__ == "__main__":
    main()
