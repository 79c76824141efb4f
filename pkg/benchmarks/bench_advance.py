"""Benchmark the RK4 advance kernel: numba nopython loop vs pure numpy.

Both implementations advance the same six spectral component arrays with
identical algebra; this script times them side by side over a range of
grid sizes so the speedup (or lack of one, on tiny grids) is visible on
the machine at hand.

Run:  python3 benchmarks/bench_advance.py [--steps N] [--repeats R]
The numba column requires numba importable and QMHDWAVES_NO_NUMBA unset.
"""

import argparse
import time

import numpy as np

from qmhdwaves import _kernels


def make_problem(n, seed=0):
    rng = np.random.default_rng(seed)
    fields = tuple(
        (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * 1e-6
        for _ in range(6))
    kappa = 2.0 * np.pi * np.fft.fftfreq(n, d=0.1)
    coef = (kappa, kappa / (4.0 * np.pi), 0.8 * kappa, kappa,
            0.01 * kappa ** 2, 0.004 * kappa ** 2)
    return fields, coef, (1.0, 0.3, -0.1)


def time_backend(advance, n, steps, repeats):
    best = np.inf
    for _ in range(repeats):
        fields, coef, h0 = make_problem(n)
        start = time.perf_counter()
        advance(fields, coef, h0, 1e-4, steps)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[64, 256, 1024, 4096])
    args = parser.parse_args()

    if _kernels.HAS_NUMBA:
        # pay JIT compilation outside the timed region
        fields, coef, h0 = make_problem(16)
        _kernels.advance_numba(fields, coef, h0, 1e-4, 1)
        header = f"{'n':>6} {'numpy [s]':>12} {'numba [s]':>12} {'speedup':>9}"
    else:
        header = f"{'n':>6} {'numpy [s]':>12}   (numba unavailable)"
    print(f"advance kernel, {args.steps} RK4 steps, best of {args.repeats}")
    print(header)
    for n in args.sizes:
        t_np = time_backend(_kernels.advance_numpy, n, args.steps,
                            args.repeats)
        if _kernels.HAS_NUMBA:
            t_nb = time_backend(_kernels.advance_numba, n, args.steps,
                                args.repeats)
            print(f"{n:>6} {t_np:>12.4f} {t_nb:>12.4f} {t_np / t_nb:>8.1f}x")
        else:
            print(f"{n:>6} {t_np:>12.4f}")


if __name__ == "__main__":
    main()
