"""Time the numba-jitted kernels against the plain-Python fallback.

Each measurement runs in a subprocess with APCONE_NUMBA forced, so both
paths start from the same cold interpreter; the jitted timings exclude
compilation (a warm-up call precedes the timed loop).

Usage: python3 benchmarks/bench_backends.py [--iters N]
"""

import argparse
import json
import os
import subprocess
import sys

_WORKER = r"""
import json, sys, time
import numpy as np
from apcone import kernels
from apcone.catalog import get_example

iters = int(sys.argv[1])
inst = get_example("ex6.1")
E = inst.plane

def timed(fn, *args):
    fn(*args)  # warm-up / compile
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0

A = np.array([[1.0, 0.3, -0.1], [0.3, 0.2, 0.05], [-0.1, 0.05, -0.4]])

def eig_batch(n):
    for _ in range(n):
        kernels.jacobi_eigh(A, 1e-14, 100)

res = {
    "backend": "numba" if kernels.USING_NUMBA else "numpy",
    "ap_iterate": timed(kernels.ap_iterate, E.anchor, E.basis, E.chol,
                        inst.start, iters, 0.0, E.anchor, 1000, 1e-14, 100),
    "jacobi_eigh_x10000": timed(eig_batch, 10000),
    "recurrence_1e6": timed(kernels.recurrence_sequence,
                            1.0 / 3.0, 0.0, 2, 0.1, 10 ** 6, 0),
}
print(json.dumps(res))
"""


def run_backend(numba_flag, iters):
    env = dict(os.environ, APCONE_NUMBA="1" if numba_flag else "0")
    out = subprocess.run([sys.executable, "-c", _WORKER, str(iters)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iters", type=int, default=20000,
                        help="AP iterations to time (default 20000)")
    args = parser.parse_args()

    rows = [run_backend(True, args.iters), run_backend(False, args.iters)]
    keys = ["ap_iterate", "jacobi_eigh_x10000", "recurrence_1e6"]
    print(f"{'kernel':<22}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for key in keys:
        t_nb, t_np = rows[0][key], rows[1][key]
        print(f"{key:<22}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>10.1f}x")


if __name__ == "__main__":
    main()
