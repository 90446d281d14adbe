"""Exact deciders for NegStab, NegSat and NegPath.

Every decider runs on one of two engines:

``brute``
    enumerate all ``2**n`` subsets in canonical order (see ``_kernels``);
    the reference oracle.
``sat``
    encode the kernel conditions as CNF and hand them to :mod:`negators.sat`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import GraphError, TaskGraph, check_conditions, path_exists
from .sat import CnfFormula, iter_models, solve

ENGINES = ("brute", "sat")
PROBLEMS = ("negstab", "negsat", "negpath")
DEFAULT_CAP = 24


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    problem: str
    answer: bool
    witness: frozenset | None
    engine: str
    examined: int  # subsets (brute) or models (sat) looked at
    elapsed: float
    path: tuple[str, ...] | None = None

    def __bool__(self) -> bool:
        return self.answer

    def to_record(self, witness: bool = True, timing: bool = False) -> dict:
        rec: dict = {"problem": self.problem, "answer": "yes" if self.answer else "no", "engine": self.engine}
        if witness and self.witness is not None:
            rec["witness"] = sorted(self.witness)
        if witness and self.path is not None:
            rec["path"] = list(self.path)
        rec["examined"] = self.examined
        if timing:
            rec["elapsed"] = round(self.elapsed, 6)
        return rec


def encode_kernel_cnf(g: TaskGraph) -> tuple[CnfFormula, dict[str, int]]:
    """CNF whose models are exactly the maximal, stable assignments of ``g``.

    Variable ``i+1`` stands for task ``g.tasks[i]``.
    """
    var = {t: i + 1 for i, t in enumerate(g.tasks)}
    clauses: list[list[int]] = []
    for s, t in g.negators:
        clauses.append([-var[s], -var[t]])
    for t in g.tasks:
        clauses.append([var[t]] + [var[s] for s in g.negator_sources[t]])
    return CnfFormula(len(g.tasks), clauses), var


def _masks(g: TaskGraph) -> tuple[np.ndarray, np.ndarray]:
    idx = g.index
    in_masks = np.zeros(len(g.tasks), dtype=np.int64)
    comm_out = np.zeros(len(g.tasks), dtype=np.int64)
    for s, t in g.negators:
        in_masks[idx[t]] |= np.int64(1) << idx[s]
    for s, t in g.comms:
        comm_out[idx[s]] |= np.int64(1) << idx[t]
    return in_masks, comm_out


def _mask_to_set(g: TaskGraph, mask: int) -> frozenset:
    return frozenset(t for i, t in enumerate(g.tasks) if (mask >> i) & 1)


def brute_force_decide(
    problem: str,
    g: TaskGraph,
    task: str | None = None,
    source: str | None = None,
    target: str | None = None,
    cap: int = DEFAULT_CAP,
) -> Verdict:
    """Exhaustive subset search; the witness is the lowest qualifying bitmask."""
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}")
    n = len(g.tasks)
    if n > cap:
        raise CapExceeded(f"{n} tasks exceed the brute-force cap of {cap}")
    t0 = time.perf_counter()
    in_masks, comm_out = _masks(g)
    required, src, dst = 0, -1, -1
    if problem == "negsat":
        g.require(task)
        required = 1 << g.index[task]
    elif problem == "negpath":
        g.require(source, target)
        src, dst = g.index[source], g.index[target]
        required = (1 << src) | (1 << dst)
    found, examined = _kernels.first_kernel(in_masks, comm_out, required, src, dst)
    witness = None if found < 0 else _mask_to_set(g, found)
    path = None
    if witness is not None and problem == "negpath":
        path = path_exists(g, witness, source, target)[1]
    return Verdict(problem, witness is not None, witness, "brute", examined, time.perf_counter() - t0, path)


def count_kernels(g: TaskGraph, cap: int = DEFAULT_CAP) -> int:
    if len(g.tasks) > cap:
        raise CapExceeded(f"{len(g.tasks)} tasks exceed the brute-force cap of {cap}")
    return _kernels.count_kernels(_masks(g)[0])


def _model_to_set(g: TaskGraph, model: dict) -> frozenset:
    return frozenset(t for i, t in enumerate(g.tasks) if model[i + 1])


def _sat(problem, g, task=None, source=None, target=None) -> Verdict:
    t0 = time.perf_counter()
    f, var = encode_kernel_cnf(g)
    if problem == "negsat":
        g.require(task)
        f = f.with_clauses([[var[task]]])
    elif problem == "negpath":
        g.require(source, target)
        f = f.with_clauses([[var[source]], [var[target]]])
        examined = 0
        for model in iter_models(f):
            examined += 1
            v = _model_to_set(g, model)
            ok, path = path_exists(g, v, source, target)
            if ok:
                return Verdict(problem, True, v, "sat", examined, time.perf_counter() - t0, path)
        return Verdict(problem, False, None, "sat", examined, time.perf_counter() - t0)
    model = solve(f)
    witness = None if model is None else _model_to_set(g, model)
    return Verdict(problem, witness is not None, witness, "sat", 1, time.perf_counter() - t0)


def _dispatch(problem, g, engine, **kw) -> Verdict:
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}")
    if engine == "brute":
        return brute_force_decide(problem, g, **kw)
    if engine == "sat":
        return _sat(problem, g, **kw)
    raise ValueError(f"unknown engine {engine!r}")


def decide_negstab(g: TaskGraph, engine: str = "sat", **kw) -> Verdict:
    return _dispatch("negstab", g, engine, **kw)


def decide_negsat(g: TaskGraph, task: str, engine: str = "sat", **kw) -> Verdict:
    return _dispatch("negsat", g, engine, task=task, **kw)


def decide_negpath(g: TaskGraph, source: str, target: str, engine: str = "sat", **kw) -> Verdict:
    return _dispatch("negpath", g, engine, source=source, target=target, **kw)


def decide(problem: str, g: TaskGraph, engine: str = "sat", **kw) -> Verdict:
    return _dispatch(problem, g, engine, **kw)


def verify_verdict(g: TaskGraph, v: Verdict, task=None, source=None, target=None) -> bool:
    """Post-hoc check of a yes-witness against all conditions of its problem."""
    if not v.answer:
        return v.witness is None
    if v.witness is None or not check_conditions(g, v.witness).ok:
        return False
    if v.problem == "negsat":
        return task in v.witness
    if v.problem == "negpath":
        ok, _ = path_exists(g, v.witness, source, target)
        return ok
    return True


__all__ = [
    "CapExceeded",
    "GraphError",
    "Verdict",
    "brute_force_decide",
    "count_kernels",
    "decide",
    "decide_negpath",
    "decide_negsat",
    "decide_negstab",
    "encode_kernel_cnf",
    "verify_verdict",
]
