"""Compare the compiled kernels with the pure-Python fallback.

Usage: ``python3 benchmarks/bench_kernels.py [--repeat N]``
"""
import argparse
import timeit

import numpy as np
from scipy.special import roots_legendre

from tfloc import _kernels_py as py

try:
    from tfloc import _kernels as cy
except ImportError:  # extension not built
    cy = None


def cases():
    x = 0.5 * roots_legendre(400)[0]
    base = np.sort(np.random.default_rng(0).uniform(0, 1, 60))[::-1]
    z = np.linspace(-3, 3, 20_000)
    q = (-2.0, -0.5, 0.5, 2.0)
    return {
        "sinc_matrix n=400": lambda k: k.sinc_matrix(x, x),
        "product_enumerate d=3": lambda k: k.product_enumerate(base, 3, 1e-6),
        "trapezoid_fourier 20k": lambda k: k.trapezoid_fourier(z, q, 1.5),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<26}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for name, fn in cases().items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:<26}{t_py:>14.2f}{'n/a':>14}{'':>10}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
        a, b = np.asarray(fn(py)), np.asarray(fn(cy))
        if a.dtype.kind == "f" and a.ndim == 1:  # enumeration order is unspecified
            a, b = np.sort(a), np.sort(b)
        same = np.allclose(a, b, rtol=1e-12, atol=1e-14)
        print(f"{name:<26}{t_py:>14.2f}{t_cy:>14.2f}{t_py / t_cy:>9.1f}x{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
