"""Timing comparison of the compiled extension against the pure-Python
fallback, kernel by kernel and for one short end-to-end run.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import time

import numpy as np

from svmdmoea import _kernels_py
from svmdmoea.backend import HAVE_COMPILED, get_backend, set_backend
from svmdmoea.dmoea import AlgorithmVariant, run
from svmdmoea.evolution import GAParams
from svmdmoea.harness import EnvironmentConfig
from svmdmoea.problems import make_problem

try:
    from svmdmoea import _speedups
except ImportError:
    _speedups = None


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _bench_kernels(repeat):
    rng = np.random.default_rng(42)
    objs = rng.random((300, 3))
    ref = rng.random((1000, 3))
    approx = rng.random((100, 3))

    n = 120
    x = rng.random((n, 4))
    w = rng.normal(size=4)
    labels = np.where(x @ w > np.median(x @ w), 1.0, -1.0)
    gram = x @ x.T

    cases = [
        ("nondominated_ranks (300x3)",
         lambda k: k.nondominated_ranks(objs)),
        ("min_sq_dists (1000 ref, 100 approx)",
         lambda k: k.min_sq_dists(ref, approx)),
        ("smo_solve (120 points, linear gram)",
         lambda k: k.smo_solve(gram, labels, 10.0, 1e-3, 5, 100_000, 7)),
    ]
    rows = []
    for label, call in cases:
        t_py = _time(lambda: call(_kernels_py), repeat)
        t_cy = _time(lambda: call(_speedups), repeat)
        rows.append((label, t_py, t_cy))
    return rows


def _bench_run(repeat):
    config = EnvironmentConfig("custom:10:5:25", 10, 5, 25)
    ga = GAParams(pop_size=40)
    variant = AlgorithmVariant("svm_dmoea")

    def one():
        run(variant, make_problem("dMOP2"), config, ga=ga, seed=0,
            reference_points=500)

    times = {}
    for name in ("python", "compiled"):
        set_backend(name)
        times[name] = _time(one, repeat)
    return [("svm_dmoea run (dMOP2, 5 envs, pop 40)",
             times["python"], times["compiled"])]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="repetitions per case; best time is kept")
    args = parser.parse_args()

    if not HAVE_COMPILED:
        print("compiled extension not built; nothing to compare")
        return 1

    before = get_backend()
    try:
        rows = _bench_kernels(args.repeat) + _bench_run(args.repeat)
    finally:
        set_backend(before)

    width = max(len(r[0]) for r in rows)
    print(f"{'case':<{width}}  {'python':>10}  {'compiled':>10}  speedup")
    for label, t_py, t_cy in rows:
        print(f"{label:<{width}}  {t_py * 1e3:>8.2f}ms  "
              f"{t_cy * 1e3:>8.2f}ms  {t_py / t_cy:>6.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
