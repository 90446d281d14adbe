"""Compare the numba and numpy brute-force kernels on random negator graphs.

Usage: python benchmarks/bench_brute.py [--sizes 16 18 20 22] [--repeat 3]

Each size counts every kernel of a seeded random graph (the full ``2**n``
sweep, no early exit), so both backends do identical work.
"""

from __future__ import annotations

import argparse
import time

from negators import _kernels
from negators.deciders import _masks
from negators.generate import random_graph


def best_of(fn, repeat: int) -> tuple[float, int]:
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[16, 18, 20, 22])
    p.add_argument("--density", type=float, default=0.2)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    if _kernels.HAS_NUMBA:
        # compile outside the timed region
        warm = _masks(random_graph(4, seed=0))[0]
        _kernels.count_kernels_numba(warm, 0, 16)

    print(f"{'tasks':>5}  {'subsets':>9}  {'kernels':>7}  {'numpy s':>8}  {'numba s':>8}  {'speedup':>7}")
    for n in args.sizes:
        in_masks = _masks(random_graph(n, args.density, seed=n))[0]
        stop = 1 << n
        t_np, k_np = best_of(lambda: _kernels.count_kernels_numpy(in_masks, 0, stop), args.repeat)
        if _kernels.HAS_NUMBA:
            t_nb, k_nb = best_of(lambda: _kernels.count_kernels_numba(in_masks, 0, stop), args.repeat)
            assert k_nb == k_np, "backends disagree"
            nb, speed = f"{t_nb:8.4f}", f"{t_np / t_nb:6.1f}x"
        else:
            nb, speed = f"{'n/a':>8}", f"{'n/a':>7}"
        print(f"{n:>5}  {stop:>9}  {k_np:>7}  {t_np:8.4f}  {nb}  {speed}")


if __name__ == "__main__":
    main()
