"""Compiled vs numpy pair-energy kernels.

    python3 benchmarks/bench_kernels.py [--sizes 1000 5000 20000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from localenergy import _pycore
from localenergy.equilibrium import RealEquilibrium
from localenergy.metric import _arch_arrays

try:
    from localenergy import _core
except ImportError:  # extension not built
    _core = None


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 5000, 20000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    eq = RealEquilibrium()
    print(f"{'N':>7} {'python [s]':>11} {'compiled [s]':>13} {'speedup':>8} {'rel diff':>9}")
    for n in args.sizes:
        arrs = _arch_arrays(eq.sample(n, eq.make_rng(n)))
        tp, (sp, _) = best_of(_pycore.arch_pair_sum, arrs, args.repeat)
        if _core is None:
            print(f"{n:>7} {tp:>11.3f} {'n/a':>13}")
            continue
        tc, (sc, _) = best_of(_core.arch_pair_sum, arrs, args.repeat)
        print(f"{n:>7} {tp:>11.3f} {tc:>13.3f} {tp / tc:>8.2f} {abs(sp - sc) / abs(sp):>9.1e}")


if __name__ == "__main__":
    main()
