"""Compiled versus numpy kernels.

Times the two hot loops (exponential-kernel recurrence and the
Hilbert-Schmidt pair sum) on both backends and checks that they agree.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from diracpi import _core_py

try:
    from diracpi import _core
except ImportError:
    _core = None


def cases(rng):
    for n in (2000, 20000):
        x = np.sort(rng.uniform(-10, 10, n))
        w = np.full(n, 20.0 / n)
        f = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
        yield f"exp_kernel_apply n={n}", "exp_kernel_apply", (x, w, f, 0.3 + 1.2j)
    for n in (400, 1600):
        x = np.linspace(-10, 10, n)
        w = np.full(n, 20.0 / n)
        even = rng.normal(size=(2, 2, 2)) + 0j
        odd = rng.normal(size=(2, 2, 2)) + 0j
        P = rng.normal(size=(n, 2, 4)) + 1j * rng.normal(size=(n, 2, 4))
        Q = rng.normal(size=(n, 4, 2)) + 1j * rng.normal(size=(n, 4, 2))
        yield f"hs_sum n={n}", "hs_sum", (x, w, even, odd, np.array([1j, 0.5 + 1j]), P, Q)


def max_diff(a, b):
    if isinstance(a, tuple):
        return max(float(np.max(np.abs(u - v))) for u, v in zip(a, b))
    return abs(a - b) / max(abs(b), 1e-300)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(0)
    if _core is None:
        print("compiled extension not available; timing the numpy fallback only")
    print(f"{'case':28s} {'numpy [s]':>11s} {'cython [s]':>11s} {'speed-up':>9s} {'max diff':>9s}")
    for label, name, call_args in cases(rng):
        py = getattr(_core_py, name)
        t_py = min(timeit.repeat(lambda: py(*call_args), number=1, repeat=args.repeat))
        if _core is None:
            print(f"{label:28s} {t_py:11.4f}")
            continue
        cy = getattr(_core, name)
        t_cy = min(timeit.repeat(lambda: cy(*call_args), number=1, repeat=args.repeat))
        diff = max_diff(cy(*call_args), py(*call_args))
        print(f"{label:28s} {t_py:11.4f} {t_cy:11.4f} {t_py / t_cy:9.1f} {diff:9.1e}")


if __name__ == "__main__":
    main()
