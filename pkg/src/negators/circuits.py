"""Logic gadgets built from negator relationships, and a netlist compiler.

A task is HIGH while it is assigned. A task receiving negators from
tasks ``a, b, ...`` can only be assigned while none of them is, so every
gadget below is a composition of NOR gates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph import FormatError, TaskGraph, dumps, load_json
from .sat import CnfFormula, iter_models

NETLIST_SCHEMA = "netlist-v1"
GATE_KINDS = ("NOR", "INV")


class NetlistError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    inputs: tuple[str, ...]
    output: str


@dataclass(frozen=True)
class Netlist:
    inputs: tuple[str, ...]
    gates: tuple[Gate, ...]
    outputs: tuple[str, ...] = ()


@dataclass(frozen=True)
class GadgetOutput:
    graph: TaskGraph
    io: dict[str, str] = field(default_factory=dict)

    def merged(self, other: "GadgetOutput") -> "GadgetOutput":
        return GadgetOutput(self.graph.merged(other.graph), {**self.io, **other.io})


def nor_gadget(inputs: Iterable[str], output: str) -> GadgetOutput:
    inputs = list(dict.fromkeys(inputs))
    if not inputs:
        raise ValueError("a NOR gadget needs at least one input")
    if output in inputs:
        raise ValueError(f"output {output!r} duplicates an input name")
    g = TaskGraph.build(inputs + [output], [(i, output) for i in inputs])
    return GadgetOutput(g, {n: n for n in inputs + [output]})


def mutex_gadget(x: str, negated: str | None = None) -> GadgetOutput:
    """Two tasks blocking each other: every stable assignment holds exactly one."""
    nx = negated if negated is not None else f"~{x}"
    g = TaskGraph.build([x, nx], [(x, nx), (nx, x)])
    return GadgetOutput(g, {x: x, nx: nx})


def sr_latch() -> GadgetOutput:
    """Mutex pair ``Q``/``~Q``; ``S`` blocks ``~Q`` (set), ``R`` blocks ``Q`` (reset)."""
    latch = mutex_gadget("Q", "~Q")
    g = latch.graph.merged(TaskGraph.build(["S", "R", "Q", "~Q"], [("S", "~Q"), ("R", "Q")]))
    return GadgetOutput(g, {n: n for n in ("S", "R", "Q", "~Q")})


def ring_oscillator(n: int, prefix: str = "R") -> GadgetOutput:
    """``n`` tasks in a directed negator cycle ``R0 -> R1 -> ... -> R0``."""
    if n < 3 or n % 2 == 0:
        raise ValueError("a ring oscillator needs an odd number of at least 3 inverters")
    names = [f"{prefix}{i}" for i in range(n)]
    g = TaskGraph.build(names, [(names[i], names[(i + 1) % n]) for i in range(n)])
    return GadgetOutput(g, {t: t for t in names})


def validate_netlist(nl: Netlist) -> list[str]:
    errors = []
    driven = list(nl.inputs)
    for gate in nl.gates:
        driven.append(gate.output)
    seen: set[str] = set()
    for net in driven:
        if net in seen:
            errors.append(f"net {net!r} is driven more than once")
        seen.add(net)
    for gate in nl.gates:
        if gate.kind not in GATE_KINDS:
            errors.append(f"unknown gate kind {gate.kind!r}")
        if not gate.inputs:
            errors.append(f"gate driving {gate.output!r} has no inputs")
        if gate.kind == "INV" and len(gate.inputs) != 1:
            errors.append(f"INV gate driving {gate.output!r} must have exactly one input")
        for net in gate.inputs:
            if net not in seen:
                errors.append(f"dangling net {net!r} feeds gate driving {gate.output!r}")
    for net in nl.outputs:
        if net not in seen:
            errors.append(f"dangling output net {net!r}")
    return errors


def compile_netlist(nl: Netlist) -> GadgetOutput:
    """One task per net; each gate contributes a negator from every input net to its output."""
    errors = validate_netlist(nl)
    if errors:
        raise NetlistError("; ".join(errors))
    nets = list(nl.inputs) + [g.output for g in nl.gates]
    negators = [(i, gate.output) for gate in nl.gates for i in gate.inputs]
    return GadgetOutput(TaskGraph.build(nets, negators), {n: n for n in nets})


def cnf_to_two_stage_nor(f: CnfFormula, with_mutex: bool = True) -> GadgetOutput:
    """CNF as NOR(NOR(clause literals)...): output task ``A`` is HIGH iff ``f`` holds.

    Literal tasks are named like the 3SAT->NegSat reduction (``Pk``, ``Nk``),
    the first stage ``ICi``. Without ``with_mutex`` the literal tasks are free
    inputs and may be assigned inconsistently.
    """
    out = GadgetOutput(TaskGraph.build(["A"]), {"A": "A"})
    for k in range(1, f.num_vars + 1):
        pos, neg = f"P{k}", f"N{k}"
        if with_mutex:
            block = mutex_gadget(pos, neg)
        else:
            block = GadgetOutput(TaskGraph.build([pos, neg]), {pos: pos, neg: neg})
        out = out.merged(GadgetOutput(block.graph, {f"x{k}": pos, f"~x{k}": neg}))
    for i, clause in enumerate(f.clauses, 1):
        lits = [f"P{l}" if l > 0 else f"N{-l}" for l in clause]
        ic = f"IC{i}"
        stage1 = nor_gadget(lits, ic) if lits else GadgetOutput(TaskGraph.build([ic]))
        stage2 = nor_gadget([ic], "A")
        out = out.merged(GadgetOutput(stage1.graph.merged(stage2.graph), {f"c{i}": ic}))
    return out


def stable_extensions(g: TaskGraph, forced: Mapping[str, bool], limit: int = 1 << 16) -> list[frozenset]:
    """All assignments that agree with ``forced`` and are maximal and stable elsewhere.

    Forced tasks model circuit inputs: their level is imposed from outside,
    so the kernel conditions are only required of the remaining tasks.
    """
    g.require(*forced)
    var = {t: i + 1 for i, t in enumerate(g.tasks)}
    clauses = []
    for t in g.tasks:
        if t in forced:
            clauses.append([var[t] if forced[t] else -var[t]])
            continue
        for s in g.negator_sources[t]:
            clauses.append([-var[s], -var[t]])
        clauses.append([var[t]] + [var[s] for s in g.negator_sources[t]])
    out = []
    for model in iter_models(CnfFormula(len(g.tasks), clauses)):
        out.append(frozenset(t for t in g.tasks if model[var[t]]))
        if len(out) >= limit:
            break
    return out


# -- netlist-v1 documents ----------------------------------------------------


def netlist_to_document(nl: Netlist) -> dict:
    return {
        "schema": NETLIST_SCHEMA,
        "inputs": list(nl.inputs),
        "gates": [{"kind": g.kind, "inputs": list(g.inputs), "output": g.output} for g in nl.gates],
        "outputs": list(nl.outputs),
    }


def serialize_netlist(nl: Netlist) -> str:
    return dumps(netlist_to_document(nl))


def _names(doc: dict, key: str, where: str) -> tuple[str, ...]:
    raw = doc.get(key, [])
    if not isinstance(raw, list) or not all(isinstance(x, str) and x for x in raw):
        raise FormatError(f"{where}'{key}' must be a list of net names")
    return tuple(raw)


def parse_netlist(text: str) -> Netlist:
    doc = load_json(text)
    if not isinstance(doc, dict):
        raise FormatError("netlist document must be an object")
    if doc.get("schema", NETLIST_SCHEMA) != NETLIST_SCHEMA:
        raise FormatError(f"unsupported schema {doc.get('schema')!r}, expected {NETLIST_SCHEMA!r}")
    gates = []
    for i, item in enumerate(doc.get("gates", [])):
        if not isinstance(item, dict) or not isinstance(item.get("output"), str):
            raise FormatError(f"gates[{i}] must be an object with 'kind', 'inputs', 'output'")
        gates.append(Gate(str(item.get("kind", "NOR")).upper(), _names(item, "inputs", f"gates[{i}]."), item["output"]))
    nl = Netlist(_names(doc, "inputs", ""), tuple(gates), _names(doc, "outputs", ""))
    errors = validate_netlist(nl)
    if errors:
        raise NetlistError("; ".join(errors))
    return nl
