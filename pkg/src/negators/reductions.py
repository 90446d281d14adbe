"""Polynomial-time transformations between 3SAT, NegSat, NegPath and NegStab.

Naming used by the 3SAT constructions (variable ``k``, clause ``i``,
literal position ``j``, all 1-based):

``Pk`` / ``Nk``
    assignment tasks for ``x_k`` and ``not x_k`` (mutually exclusive)
``ICi``
    inverted-clause task of clause ``i`` (NegSat)
``Li_j``
    literal task of the ``j``-th literal of clause ``i`` (NegPath)
``Ji``
    join task between clause ``i`` and ``i+1`` (NegPath)
``A``, ``B``
    distinguished tasks
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .graph import TaskGraph, serialize
from .sat import CnfFormula, to_dimacs

REDUCTIONS = ("3sat-to-negsat", "3sat-to-negpath", "negsat-to-negpath", "negsat-to-negstab")


@dataclass(frozen=True)
class ReductionOutput:
    graph: TaskGraph
    roles: dict[str, str]
    reduction: str
    source_digest: str

    def document_extras(self) -> dict:
        return {
            "roles": {k: self.roles[k] for k in sorted(self.roles)},
            "provenance": {"reduction": self.reduction, "source": self.source_digest},
        }


def _digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()[:16]


def assignment_task(lit: int) -> str:
    return f"P{lit}" if lit > 0 else f"N{-lit}"


def _assignment_pairs(f: CnfFormula):
    tasks, negators = [], []
    for k in range(1, f.num_vars + 1):
        tasks += [f"P{k}", f"N{k}"]
        negators += [(f"P{k}", f"N{k}"), (f"N{k}", f"P{k}")]
    return tasks, negators


def threesat_to_negsat(f: CnfFormula) -> ReductionOutput:
    tasks, negators = _assignment_pairs(f)
    roles = {t: t for t in tasks}
    tasks.append("A")
    for i, clause in enumerate(f.clauses, 1):
        ic = f"IC{i}"
        tasks.append(ic)
        roles[ic] = ic
        negators += [(assignment_task(lit), ic) for lit in clause]
        negators.append((ic, "A"))
    roles["A"] = "A"
    g = TaskGraph.build(tasks, negators)
    return ReductionOutput(g, roles, "3sat-to-negsat", _digest(to_dimacs(f)))


def threesat_to_negpath(f: CnfFormula) -> ReductionOutput:
    tasks, negators = _assignment_pairs(f)
    roles = {t: t for t in tasks}
    tasks += ["A", "B"]
    roles.update(A="A", B="B")
    comms = []
    m = len(f.clauses)
    prev = ["A"]  # tasks feeding the current clause's literal tasks
    for i, clause in enumerate(f.clauses, 1):
        layer = []
        for j, lit in enumerate(clause, 1):
            name = f"L{i}_{j}"
            layer.append(name)
            negators.append((assignment_task(-lit), name))
            comms += [(p, name) for p in prev]
        tasks += layer
        roles.update({t: t for t in layer})
        if i < m:
            join = f"J{i}"
            tasks.append(join)
            roles[join] = join
            comms += [(t, join) for t in layer]
            prev = [join]
        else:
            prev = layer
    comms += [(p, "B") for p in prev]
    g = TaskGraph.build(tasks, negators, comms)
    return ReductionOutput(g, roles, "3sat-to-negpath", _digest(to_dimacs(f)))


def fresh_name(taken, base: str) -> str:
    """``base`` if free, else ``base#k`` for the smallest free ``k >= 1``."""
    if base not in taken:
        return base
    k = 1
    while f"{base}#{k}" in taken:
        k += 1
    return f"{base}#{k}"


def _fresh(g: TaskGraph, *bases: str) -> list[str]:
    taken = set(g.tasks)
    out = []
    for b in bases:
        name = fresh_name(taken, b)
        taken.add(name)
        out.append(name)
    return out


def negsat_to_negpath(g: TaskGraph, task: str) -> ReductionOutput:
    g.require(task)
    x, y = _fresh(g, "X", "Y")
    out = TaskGraph.build(g.tasks + (x, y), g.negators, g.comms + ((x, task), (task, y)))
    roles = {"A": task, "from": x, "to": y}
    return ReductionOutput(out, roles, "negsat-to-negpath", _digest(serialize(g) + task))


def negsat_to_negstab(g: TaskGraph, task: str) -> ReductionOutput:
    g.require(task)
    x, y, z = _fresh(g, "X", "Y", "Z")
    extra = ((task, x), (task, y), (task, z), (x, z), (z, y), (y, x))
    out = TaskGraph.build(g.tasks + (x, y, z), g.negators + extra, g.comms)
    roles = {"A": task, "X": x, "Y": y, "Z": z}
    return ReductionOutput(out, roles, "negsat-to-negstab", _digest(serialize(g) + task))


def triangle() -> TaskGraph:
    """The three-task odd negator cycle ``X -> Z -> Y -> X``."""
    return TaskGraph.build("XYZ", [("X", "Z"), ("Z", "Y"), ("Y", "X")])


def interpretation_of(witness, num_vars: int) -> dict[int, bool]:
    """Read a variable interpretation back from the assigned ``Pk``/``Nk`` tasks."""
    out = {}
    for k in range(1, num_vars + 1):
        pos, neg = f"P{k}" in witness, f"N{k}" in witness
        if pos == neg:
            raise ValueError(f"assignment tasks of x{k} are not mutually exclusive in witness")
        out[k] = pos
    return out


def expected_sizes(kind: str, f: CnfFormula | None = None, g: TaskGraph | None = None) -> dict[str, int]:
    """Closed-form task/edge counts each reduction must produce."""
    if kind == "3sat-to-negsat":
        v, m, lits = f.num_vars, len(f.clauses), sum(map(len, f.clauses))
        return {"tasks": 2 * v + m + 1, "negators": 2 * v + lits + m, "comms": 0}
    if kind == "3sat-to-negpath":
        v, m = f.num_vars, len(f.clauses)
        if m == 0:
            return {"tasks": 2 * v + 2, "negators": 2 * v, "comms": 1}
        w = [len(c) for c in f.clauses]
        return {
            "tasks": 2 * v + sum(w) + (m - 1) + 2,
            "negators": 2 * v + sum(w),
            "comms": w[0] + w[-1] + sum(w[:-1]) + sum(w[1:]),
        }
    if kind == "negsat-to-negpath":
        return {"tasks": len(g.tasks) + 2, "negators": len(g.negators), "comms": len(g.comms) + 2}
    if kind == "negsat-to-negstab":
        return {"tasks": len(g.tasks) + 3, "negators": len(g.negators) + 6, "comms": len(g.comms)}
    raise ValueError(kind)
