"""Bitmask subset-enumeration kernels behind the brute-force deciders.

Tasks are numbered ``0..n-1`` in canonical (sorted) order and a subset is
an int64 bitmask, bit ``i`` set iff task ``i`` is assigned. Subsets are
visited in increasing integer order.

Two backends share one contract:

* numba ``@njit`` scalar loops (default when numba imports), and
* chunked, vectorized numpy (set ``NEGATORS_NO_NUMBA=1`` to force it).

Both are always importable as ``first_kernel_numba`` / ``first_kernel_numpy``
so tests and the benchmark can compare them directly.
"""

from __future__ import annotations

import os

import numpy as np

MAX_TASKS = 62
CHUNK = 1 << 16

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("NEGATORS_NO_NUMBA", "").lower() not in ("1", "true", "yes")


def _first_kernel_loop(in_masks, comm_out, required, src, dst, start, stop):
    n = in_masks.shape[0]
    for s in range(start, stop):
        if (s & required) != required:
            continue
        ok = True
        for t in range(n):
            blocked = (in_masks[t] & s) != 0
            if ((s >> t) & 1) == blocked:
                ok = False
                break
        if not ok:
            continue
        if src >= 0:
            reach = np.int64(1) << src
            while True:
                grown = reach
                for t in range(n):
                    if (reach >> t) & 1:
                        grown |= comm_out[t] & s
                if grown == reach:
                    break
                reach = grown
            if ((reach >> dst) & 1) == 0:
                continue
        return s, s - start + 1
    return np.int64(-1), stop - start


def _count_kernels_loop(in_masks, start, stop):
    n = in_masks.shape[0]
    count = 0
    for s in range(start, stop):
        ok = True
        for t in range(n):
            if ((s >> t) & 1) == ((in_masks[t] & s) != 0):
                ok = False
                break
        if ok:
            count += 1
    return count


if HAS_NUMBA:
    _first_kernel_nb = numba.njit(cache=True)(_first_kernel_loop)
    _count_kernels_nb = numba.njit(cache=True)(_count_kernels_loop)


def _kernel_mask_np(in_masks: np.ndarray, s: np.ndarray) -> np.ndarray:
    ok = np.ones(s.shape, dtype=bool)
    for t in range(in_masks.shape[0]):
        member = ((s >> t) & 1).astype(bool)
        blocked = (s & in_masks[t]) != 0
        ok &= member != blocked
    return ok


def _reaches_np(comm_out: np.ndarray, s: np.ndarray, src: int, dst: int) -> np.ndarray:
    n = comm_out.shape[0]
    reach = np.full(s.shape, np.int64(1) << src, dtype=np.int64)
    for _ in range(n):
        grown = reach.copy()
        for t in range(n):
            has_t = ((reach >> t) & 1).astype(bool)
            grown |= np.where(has_t, comm_out[t] & s, 0)
        if np.array_equal(grown, reach):
            break
        reach = grown
    return ((reach >> dst) & 1).astype(bool)


def first_kernel_numpy(in_masks, comm_out, required, src, dst, start, stop):
    for lo in range(start, stop, CHUNK):
        hi = min(lo + CHUNK, stop)
        s = np.arange(lo, hi, dtype=np.int64)
        ok = (s & required) == required
        ok &= _kernel_mask_np(in_masks, s)
        if src >= 0 and ok.any():
            idx = np.flatnonzero(ok)
            ok[idx] = _reaches_np(comm_out, s[idx], src, dst)
        hits = np.flatnonzero(ok)
        if hits.size:
            return int(s[hits[0]]), int(s[hits[0]]) - start + 1
    return -1, stop - start


def count_kernels_numpy(in_masks, start, stop):
    total = 0
    for lo in range(start, stop, CHUNK):
        s = np.arange(lo, min(lo + CHUNK, stop), dtype=np.int64)
        total += int(_kernel_mask_np(in_masks, s).sum())
    return total


def first_kernel_numba(in_masks, comm_out, required, src, dst, start, stop):
    found, examined = _first_kernel_nb(
        in_masks, comm_out, np.int64(required), np.int64(src), np.int64(dst), np.int64(start), np.int64(stop)
    )
    return int(found), int(examined)


def count_kernels_numba(in_masks, start, stop):
    return int(_count_kernels_nb(in_masks, np.int64(start), np.int64(stop)))


def first_kernel(in_masks, comm_out, required=0, src=-1, dst=-1, start=0, stop=None):
    """First subset in ``[start, stop)`` that is a kernel of the negator digraph.

    ``in_masks[t]`` holds the negator sources of task ``t``; ``required`` bits
    must all be set; when ``src >= 0`` the subset must also contain a comm path
    ``src -> dst`` (``comm_out[t]`` = comm successors of ``t``). Returns
    ``(mask or -1, subsets examined)``.
    """
    n = len(in_masks)
    if n > MAX_TASKS:
        raise ValueError(f"at most {MAX_TASKS} tasks supported")
    stop = (1 << n) if stop is None else stop
    in_masks = np.ascontiguousarray(in_masks, dtype=np.int64)
    comm_out = np.ascontiguousarray(comm_out, dtype=np.int64)
    impl = first_kernel_numba if USE_NUMBA else first_kernel_numpy
    return impl(in_masks, comm_out, required, src, dst, start, stop)


def count_kernels(in_masks, start=0, stop=None) -> int:
    n = len(in_masks)
    stop = (1 << n) if stop is None else stop
    in_masks = np.ascontiguousarray(in_masks, dtype=np.int64)
    impl = count_kernels_numba if USE_NUMBA else count_kernels_numpy
    return impl(in_masks, start, stop)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
