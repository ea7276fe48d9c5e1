"""Compiled Fock-shift kernel against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Each case applies one
accelerated party's channel to a dense state reshaped as (L, d, R, L, d, R).
"""
import argparse
import time

import numpy as np

from noninertial import _kernels_py
from noninertial.channel import choose_cutoff, kraus_coefficients

try:
    from noninertial import _kernels
except ImportError:
    _kernels = None

CASES = [
    # (left, d, right, r)
    (1, 2, 1, 0.5),
    (2, 2, 1, 0.881374),
    (2, 2, 2, 1.2),
    (1, 4, 4, 1.0),
    (4, 2, 1, 1.6),
    (2, 2, 1, 2.0),
]


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'L':>3} {'d':>3} {'R':>3} {'r':>9} {'K':>5} {'numpy ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for left, d, right, r in CASES:
        K = choose_cutoff(r, d)
        coeffs = kraus_coefficients(r, d, K)
        shape = (left, d, right, left, d, right)
        rho6 = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        t_py = best_time(lambda: _kernels_py.shift_channel(rho6, coeffs), args.repeat)
        if _kernels is None:
            print(f"{left:>3} {d:>3} {right:>3} {r:>9g} {K:>5} {1e3 * t_py:>10.3f} {'n/a':>12} {'':>8}")
            continue
        t_c = best_time(lambda: _kernels.shift_channel(rho6, coeffs), args.repeat)
        diff = np.abs(_kernels.shift_channel(rho6, coeffs) - _kernels_py.shift_channel(rho6, coeffs)).max()
        assert diff < 1e-12, diff
        print(f"{left:>3} {d:>3} {right:>3} {r:>9g} {K:>5} {1e3 * t_py:>10.3f} "
              f"{1e3 * t_c:>12.3f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
