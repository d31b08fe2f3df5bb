"""Compare the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from thetametric import _pykernels as py

try:
    from thetametric import _ckernels as cy
except ImportError:
    cy = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(k, rng):
    s = rng.uniform(0, 100, 20_000).tolist()
    t = rng.uniform(0, 100, 20_000).tolist()
    r = rng.uniform(0, 1e3, 10_000)
    rs = (r * rng.uniform(0, 1, 10_000)).tolist()
    r = r.tolist()
    pts = np.sort(rng.uniform(0, 50, 150))
    dist = np.abs(pts[:, None] - pts[None, :])

    def thetas():
        for a, b in zip(s, t):
            k.theta(py.SUM_PLUS_PROD, 0.0, a, b)

    def bisections():
        for ri, si in zip(r, rs):
            k.bisect_kind(py.ROOT_SUM_POWER, 3.0, ri, si, 0.0, ri, 200)

    def scan():
        k.a3_scan(dist, py.SUM_PLUS_PROD, 0.0, 1e-9)

    return {"theta x2e4": thetas, "eta bisection x1e4": bisections, "A3 scan 150 pts": scan}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if cy is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
        return
    print(f"{'workload':<22}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    py_work = workloads(py, np.random.default_rng(0))
    cy_work = workloads(cy, np.random.default_rng(0))
    for name in py_work:
        tp = best_of(py_work[name], args.repeat)
        tc = best_of(cy_work[name], args.repeat)
        print(f"{name:<22}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
