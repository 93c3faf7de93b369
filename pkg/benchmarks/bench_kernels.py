"""Compare the numba and pure-numpy estimator-fold kernels.

Runs the Monte Carlo build kernel at a few problem sizes in this
process, then re-runs the same workload in a subprocess with
ISSA_PURE_NUMPY=1 and prints both timings side by side.

Usage: python benchmarks/bench_kernels.py [--trials 2000] [--m 30]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from issa import kernels
from issa.sampling import make_stream

SIZES = ((10, 2000), (50, 2000), (100, 500))


def workload(d, trials, m, repeats=3):
    rng = make_stream(1234)
    Zt = rng.standard_normal((trials, m, d))
    Wt = np.ones((trials, m))
    s = float((Zt**2).sum(axis=2).max() + 0.1)
    kernels.mc_fold_rank1(Zt[:2], Wt[:2], 0.1 / s, 1.0 / s)  # warm up / jit
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        kernels.mc_fold_rank1(Zt, Wt, 0.1 / s, 1.0 / s)
        best = min(best, time.perf_counter() - t0)
    return best


def run_all(trials, m):
    return {f"d={d}": workload(d, min(trials, cap), m) for d, cap in SIZES}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--m", type=int, default=30)
    ap.add_argument("--inner", action="store_true",
                    help="print JSON timings only (subprocess mode)")
    args = ap.parse_args()

    results = run_all(args.trials, args.m)
    if args.inner:
        print(json.dumps({"backend": kernels.backend(), "timings": results}))
        return

    env = dict(os.environ, ISSA_PURE_NUMPY="1")
    proc = subprocess.run(
        [sys.executable, __file__, "--trials", str(args.trials),
         "--m", str(args.m), "--inner"],
        env=env, capture_output=True, text=True, check=True,
    )
    other = json.loads(proc.stdout.strip().splitlines()[-1])

    print(f"Monte Carlo estimator builds, m={args.m}, "
          f"trials capped per size {dict(SIZES)}")
    print(f"{'size':>8} {kernels.backend():>12} {other['backend']:>12} "
          f"{'speedup':>8}")
    for key, here in results.items():
        there = other["timings"][key]
        print(f"{key:>8} {here * 1e3:>10.1f}ms {there * 1e3:>10.1f}ms "
              f"{there / here:>7.2f}x")


if __name__ == "__main__":
    main()
