#!/usr/bin/env python3
"""Time the exhaustive enumeration kernel compiled by numba against the interpreted one.

Usage: python bench/bench_kernels.py [--m-max 6] [--repeat 3]

Both paths run the same function body, so the counts must match; the
script exits nonzero if they do not.  Compilation is excluded by a warm-up
call at m = 2.
"""

import argparse
import sys
import time

from twentyv import _kernels
from twentyv.enumerate import count_brute
from twentyv.lattice import build_domain


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    fast = _kernels.dfs
    slow = _kernels.python_dfs()
    count_brute(build_domain(2), fast)  # compile

    print(f"backend: {_kernels.backend()}")
    print(f"{'m':>3} {'configs':>10} {'compiled_s':>11} {'python_s':>10} {'speedup':>8}")
    ok = True
    for m in range(1, args.m_max + 1):
        dom = build_domain(m)
        t_fast, r_fast = best_of(lambda: count_brute(dom, fast), args.repeat)
        # the interpreted path is slow; one run is enough past m = 5
        t_slow, r_slow = best_of(lambda: count_brute(dom, slow), args.repeat if m <= 5 else 1)
        ok &= r_fast == r_slow
        print(f"{m:>3} {r_fast.total:>10} {t_fast:>11.4f} {t_slow:>10.4f} {t_slow / t_fast:>8.1f}")
    if not ok:
        print("compiled and interpreted counts differ", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
