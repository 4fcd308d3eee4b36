"""Compare the numba and numpy paths of the hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Also times one end-to-end grid fidelity evaluation per backend by running a
child interpreter with QND_DISABLE_NUMBA set accordingly.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from qndsim import _kernels
from qndsim.quad_grid import make_grid, spectral_coefficients


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(n):
    grid = make_grid(n, 8.0)
    y = np.ascontiguousarray(grid.nodes)
    psi = np.exp(-y * y)
    coeffs, k = spectral_coefficients(psi, grid)
    coeffs = np.ascontiguousarray(coeffs)
    points = np.ascontiguousarray(np.exp(0.3) * y)
    weights = np.ascontiguousarray(psi * psi)
    targets = np.ascontiguousarray(make_grid(2 * n, 16.0).nodes)
    return {
        "trig_eval": (
            lambda: _kernels.trig_eval_numba(coeffs, k, -8.0, -8.0, 8.0, points),
            lambda: _kernels.trig_eval_numpy(coeffs, k, -8.0, -8.0, 8.0, points),
        ),
        "gaussian_smear": (
            lambda: _kernels.gaussian_smear_numba(weights, y, targets, 0.25, grid.dx),
            lambda: _kernels.gaussian_smear_numpy(weights, y, targets, 0.25, grid.dx),
        ),
    }


END_TO_END = (
    "import time;from qndsim import *;"
    "g=make_grid(1024,8.0);v=gaussian_wavefunction(g,0,0.25);grid_G(v,0.25);squeeze(v,0.3);"
    "t=time.perf_counter();[grid_G(v,0.04*i) for i in range(1,11)];[squeeze(v,0.3) for _ in range(10)];"
    "print(time.perf_counter()-t)"
)


def end_to_end(disable):
    env = dict(os.environ, QND_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env,
                         capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--sizes", type=int, nargs="+", default=[256, 1024, 2048])
    args = parser.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba not importable; only the numpy path is available")
        return
    print(f"{'kernel':<16}{'n':>6}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>9}")
    for n in args.sizes:
        for name, (fast, slow) in kernel_cases(n).items():
            fast()  # compile
            a = best_of(fast, args.repeat) * 1e3
            b = best_of(slow, args.repeat) * 1e3
            print(f"{name:<16}{n:>6}{a:>12.2f}{b:>12.2f}{b / a:>9.1f}")
    t_fast, t_slow = end_to_end(False), end_to_end(True)
    print(f"end-to-end (10x grid_G + 10x squeeze, n=1024): "
          f"numba {t_fast:.3f}s, numpy {t_slow:.3f}s")


if __name__ == "__main__":
    main()
