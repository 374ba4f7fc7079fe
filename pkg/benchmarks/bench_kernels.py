"""Compare the compiled and numpy implementations of the direct-sum kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from randfb import _kernels_py

try:
    from randfb import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

CASES = [
    ("autocorr N=1024 L=64", "autocorr", lambda r: (r.standard_normal(1024), 64)),
    ("autocorr N=22050 L=1024", "autocorr", lambda r: (r.standard_normal(22050), 1024)),
    ("convolve N=1024 T=64", "circular_convolve", lambda r: (r.standard_normal(1024), r.standard_normal(64))),
    ("convolve N=22050 T=512", "circular_convolve", lambda r: (r.standard_normal(22050), r.standard_normal(512))),
    ("toeplitz T=256", "toeplitz_matvec", lambda r: (r.standard_normal(256), r.standard_normal(256))),
    ("toeplitz T=1024", "toeplitz_matvec", lambda r: (r.standard_normal(1024), r.standard_normal(1024))),
]


def best_of(fn, args, repeat):
    n, _ = timeit.Timer(lambda: fn(*args)).autorange()
    return min(timeit.repeat(lambda: fn(*args), number=n, repeat=repeat)) / n


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'case':<26}{'python (ms)':>13}{'compiled (ms)':>15}{'speedup':>9}{'max |diff|':>12}")
    for label, name, make in CASES:
        inputs = make(rng)
        py = getattr(_kernels_py, name)
        t_py = best_of(py, inputs, args.repeat)
        if _kernels_c is None:
            print(f"{label:<26}{t_py * 1e3:>13.3f}{'n/a':>15}")
            continue
        c = getattr(_kernels_c, name)
        t_c = best_of(c, inputs, args.repeat)
        diff = float(np.max(np.abs(py(*inputs) - c(*inputs))))
        print(f"{label:<26}{t_py * 1e3:>13.3f}{t_c * 1e3:>15.3f}{t_py / t_c:>8.1f}x{diff:>12.1e}")


if __name__ == "__main__":
    main()
