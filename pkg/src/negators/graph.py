"""Negator task graphs: data model, condition checks, paths and file formats."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

SCHEMA = "taskgraph-v1"

Edge = tuple[str, str]
Assignment = frozenset  # frozenset[str]: the set of assigned tasks


class GraphError(ValueError):
    """Invalid graph contents or an unknown task."""


class FormatError(ValueError):
    """Malformed document; carries the 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


@dataclass(frozen=True)
class TaskGraph:
    tasks: tuple[str, ...]
    negators: tuple[Edge, ...] = ()
    comms: tuple[Edge, ...] = ()

    @classmethod
    def build(
        cls,
        tasks: Iterable[str],
        negators: Iterable[Edge] = (),
        comms: Iterable[Edge] = (),
    ) -> "TaskGraph":
        """Canonical constructor: sorts tasks and edges, drops repeated edges.

        Raises GraphError if the result violates any graph invariant.
        """
        raw = cls(
            tuple(tasks),
            tuple(tuple(e) for e in negators),
            tuple(tuple(e) for e in comms),
        )
        errors = [e for e in validate_graph(raw) if not e.startswith("duplicate edge")]
        if errors:
            raise GraphError("; ".join(errors))
        return cls(
            tuple(sorted(raw.tasks)),
            tuple(sorted(set(raw.negators))),
            tuple(sorted(set(raw.comms))),
        )

    @cached_property
    def index(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.tasks)}

    @cached_property
    def negator_sources(self) -> dict[str, tuple[str, ...]]:
        """Task -> tasks sending it a negator."""
        inbound: dict[str, list[str]] = {t: [] for t in self.tasks}
        for s, t in self.negators:
            inbound[t].append(s)
        return {t: tuple(v) for t, v in inbound.items()}

    @cached_property
    def comm_successors(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {t: [] for t in self.tasks}
        for s, t in self.comms:
            out[s].append(t)
        return {t: tuple(sorted(v)) for t, v in out.items()}

    def __contains__(self, task: object) -> bool:
        return task in self.index

    def require(self, *tasks: str) -> None:
        for t in tasks:
            if t not in self.index:
                raise GraphError(f"unknown task {t!r}")

    def merged(self, other: "TaskGraph") -> "TaskGraph":
        """Union of two graphs; shared task names are identified."""
        return TaskGraph.build(
            set(self.tasks) | set(other.tasks),
            set(self.negators) | set(other.negators),
            set(self.comms) | set(other.comms),
        )


def _is_token(name: object) -> bool:
    return isinstance(name, str) and name != "" and not any(c.isspace() for c in name)


def validate_graph(g: TaskGraph) -> list[str]:
    """Return every invariant violation of ``g``; an empty list means valid."""
    errors: list[str] = []
    seen: set[str] = set()
    for t in g.tasks:
        if not _is_token(t):
            errors.append(f"invalid task name {t!r}")
        elif t in seen:
            errors.append(f"duplicate task name {t!r}")
        seen.add(t)
    for label, edges in (("negator", g.negators), ("comm", g.comms)):
        dup: set[Edge] = set()
        for edge in edges:
            if len(edge) != 2:
                errors.append(f"{label} edge {edge!r} is not a pair")
                continue
            for end in edge:
                if end not in seen:
                    errors.append(f"{label} edge {edge[0]}->{edge[1]}: endpoint {end!r} unknown")
            if edge in dup:
                errors.append(f"duplicate edge {label} {edge[0]}->{edge[1]}")
            dup.add(edge)
    return errors


@dataclass(frozen=True)
class Violation:
    kind: str  # "unblocked-unassigned" | "negator-violated"
    task: str | None = None
    source: str | None = None
    target: str | None = None


@dataclass(frozen=True)
class ConditionReport:
    maximal: bool
    stable: bool
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.maximal and self.stable


def check_conditions(g: TaskGraph, assigned: Iterable[str]) -> ConditionReport:
    """Check maximality (condition 1) and stability (condition 2) of ``assigned``."""
    v = frozenset(assigned)
    g.require(*sorted(v))
    violations = []
    for t in g.tasks:
        if t not in v and not any(s in v for s in g.negator_sources[t]):
            violations.append(Violation("unblocked-unassigned", task=t))
    for s, t in g.negators:
        if s in v and t in v:
            violations.append(Violation("negator-violated", source=s, target=t))
    maximal = not any(x.kind == "unblocked-unassigned" for x in violations)
    stable = not any(x.kind == "negator-violated" for x in violations)
    return ConditionReport(maximal, stable, violations)


def path_exists(
    g: TaskGraph, assigned: Iterable[str], source: str, target: str
) -> tuple[bool, tuple[str, ...] | None]:
    """Shortest comm path from ``source`` to ``target`` inside the assigned set.

    BFS over comm edges visiting successors in name order, so the returned
    witness is the lexicographically first among the shortest paths.
    """
    g.require(source, target)
    v = frozenset(assigned)
    if source not in v or target not in v:
        return False, None
    parent: dict[str, str | None] = {source: None}
    queue = deque([source])
    while queue:
        node = queue.popleft()
        if node == target:
            path = [node]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return True, tuple(reversed(path))
        for nxt in g.comm_successors[node]:
            if nxt in v and nxt not in parent:
                parent[nxt] = node
                queue.append(nxt)
    return False, None


# -- documents ---------------------------------------------------------------


def to_document(g: TaskGraph, **extra: object) -> dict:
    doc: dict = {
        "schema": SCHEMA,
        "tasks": sorted(g.tasks),
        "negators": [list(e) for e in sorted(g.negators)],
        "comms": [list(e) for e in sorted(g.comms)],
    }
    for key, value in extra.items():
        if value is not None:
            doc[key] = value
    return doc


def _format(obj: object, depth: int) -> str:
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_format(v, depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and any(isinstance(x, (list, dict)) for x in obj):
        return "[\n" + ",\n".join(inner + _format(x, depth + 1) for x in obj) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(doc: dict) -> str:
    """JSON with one nesting level per line; lists of scalars stay on one line."""
    return _format(doc, 0) + "\n"


def serialize(g: TaskGraph, **extra: object) -> str:
    """Canonical taskgraph-v1 text; extra keys (``roles``, ``io``...) are appended."""
    return dumps(to_document(g, **extra))


def load_json(text: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno) from None


def _pairs(doc: dict, key: str) -> list[Edge]:
    raw = doc.get(key, [])
    if not isinstance(raw, list):
        raise FormatError(f"'{key}' must be a list of pairs")
    out = []
    for i, item in enumerate(raw):
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, str) for x in item)):
            raise FormatError(f"'{key}[{i}]' must be a [source, target] pair of names")
        out.append((item[0], item[1]))
    return out


def graph_from_document(doc: object) -> TaskGraph:
    if not isinstance(doc, dict):
        raise FormatError("task graph document must be an object")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise FormatError(f"unsupported schema {schema!r}, expected {SCHEMA!r}")
    tasks = doc.get("tasks")
    if not isinstance(tasks, list) or not all(isinstance(t, str) for t in tasks):
        raise FormatError("'tasks' must be a list of names")
    raw = TaskGraph(tuple(tasks), tuple(_pairs(doc, "negators")), tuple(_pairs(doc, "comms")))
    errors = [e for e in validate_graph(raw) if not e.startswith("duplicate edge")]
    if errors:
        raise FormatError("; ".join(errors))
    return TaskGraph.build(raw.tasks, raw.negators, raw.comms)


def parse_document(text: str) -> tuple[TaskGraph, dict]:
    """Parse taskgraph-v1 text; returns the graph and the full raw document."""
    doc = load_json(text)
    return graph_from_document(doc), doc  # type: ignore[return-value]


def parse(text: str) -> TaskGraph:
    return parse_document(text)[0]


def _q(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: TaskGraph, assigned: Iterable[str] | None = None) -> str:
    """Graphviz rendering; unassigned tasks are grayed out when ``assigned`` is given."""
    v = None if assigned is None else frozenset(assigned)
    if v is not None:
        g.require(*sorted(v))
    lines = ["digraph negators {", "  node [shape=circle];"]
    for t in g.tasks:
        attrs = ""
        if v is not None:
            attrs = " [style=filled, fillcolor=lightblue]" if t in v else " [color=gray, fontcolor=gray]"
        lines.append(f"  {_q(t)}{attrs};")
    for s, t in g.negators:
        lines.append(f"  {_q(s)} -> {_q(t)} [arrowhead=dot, color=red];")
    for s, t in g.comms:
        lines.append(f"  {_q(s)} -> {_q(t)} [arrowhead=normal, color=black];")
    lines.append("}")
    return "\n".join(lines) + "\n"

