"""Time the numba and numpy kernels on random DMGs.

    python3 benchmarks/bench_kernels.py [--sizes 6 8 10 12] [--graphs 20] [--seed 0]

The first numba call per kernel compiles (or loads the on-disk cache); it is
run once before timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dmgsep import kernels
from dmgsep.oracle import random_dmg


def _table_args(g):
    ch, pa, sib = g.masks()
    cmasks = np.arange(1 << g.n, dtype=np.int64)
    return ch, pa, sib, g.ancestor_masks(), cmasks


def _time(fn, args_list, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[6, 8, 10, 12])
    p.add_argument("--graphs", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if kernels.numba is None:
        raise SystemExit("numba is not importable; nothing to compare")

    warm = _table_args(random_dmg(3, seed=0))
    kernels.reach_table_numba(*warm)

    print(f"{'n':>3} {'numpy s':>10} {'numba s':>10} {'speedup':>8}  agree")
    for n in args.sizes:
        graphs = [random_dmg(n, 0.3, 0.15, seed=args.seed * 1000 + i)
                  for i in range(args.graphs)]
        table_args = [_table_args(g) for g in graphs]
        agree = all(np.array_equal(kernels.reach_table_numpy(*a), kernels.reach_table_numba(*a))
                    for a in table_args)
        t_np = _time(kernels.reach_table_numpy, table_args, args.repeat)
        t_nb = _time(kernels.reach_table_numba, table_args, args.repeat)
        print(f"{n:>3} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x  {agree}")


if __name__ == "__main__":
    main()
