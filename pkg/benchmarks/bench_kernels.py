"""Benchmark the hot kernels: numba @njit vs the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [n_points]

Times each kernel on a large coordinate array under both backends (the
jitted functions compiled via germflow._accel versus the py_* reference
bodies executed as plain numpy), then times one end-to-end variation curve.
Results depend on GERMFLOW_NUMBA only through which backend the *library*
uses; both paths are always timed here explicitly.
"""

import sys
import time

import numpy as np

from germflow import _kernels as K
from germflow._accel import USING_NUMBA


def best_of(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 2_000_000
    z = -np.exp(np.linspace(1.2, 45.0, n))
    w = np.linspace(1.4, 10_000.0, n)

    cases = []
    for name in sorted(K.ACTIVE_KERNELS):
        active = K.ACTIVE_KERNELS[name]
        ref = K.PYTHON_KERNELS[name]
        if name.startswith("profile_"):
            args = (w,)
        elif name == "affine_derivative_density":
            args = (w, 1.0, 0.0)
        else:
            args = (z, 0.7)
        active(*args)  # warm the JIT before timing
        cases.append((name, best_of(active, *args), best_of(ref, *args)))

    backend = "numba" if USING_NUMBA else "numpy (fallback)"
    print(f"library backend: {backend}; array size: {n}")
    print(f"{'kernel':<28} {'jitted[s]':>10} {'numpy[s]':>10} {'speedup':>8}")
    for name, t_jit, t_py in cases:
        print(f"{name:<28} {t_jit:>10.4f} {t_py:>10.4f} {t_py / t_jit:>8.2f}x")

    from germflow import conjugacy_variation_curve

    A = np.geomspace(1e2, 1e4, 24)
    t0 = time.perf_counter()
    conjugacy_variation_curve(1.0, 0.0, A)
    print(f"\nconjugacy_variation_curve(1,0) over A in [1e2,1e4]: "
          f"{time.perf_counter() - t0:.2f}s ({backend})")


if __name__ == "__main__":
    main()
