"""Deterministic round-based simulation of negator-aware task assignment.

The hormone loop is reduced to what negators need:

* a running task emits its negators; receivers see them one round later,
* a running task is stopped when another running task negates it,
* an unassigned task with no active inbound negator is taken by the
  lowest-id eligible PE that is not suspended and still has start budget.

``parallel`` mode starts every such task in the same round, ``sequential``
only the smallest one by name. Runs are classified by fingerprinting
the state (running map plus active negators) once the suspension schedule
has no further changes ahead.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

from .graph import Edge, FormatError, TaskGraph, check_conditions, graph_from_document, load_json, to_document

SIM_SCHEMA = "simconfig-v1"
MODES = ("parallel", "sequential")

Interval = tuple[int, "int | None"]  # [start, stop); None = forever


class SimConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PeSpec:
    id: str
    eligible: frozenset
    suspended: tuple[Interval, ...] = ()
    start_budget: int | None = None  # max starts per round; None = unlimited

    def suspended_at(self, rnd: int) -> bool:
        return any(a <= rnd and (b is None or rnd < b) for a, b in self.suspended)


@dataclass(frozen=True)
class SimConfig:
    graph: TaskGraph
    pes: tuple[PeSpec, ...]
    mode: str = "parallel"
    forced: Mapping[str, str] = field(default_factory=dict)  # task -> PE id at round 0
    max_rounds: int = 200

    @cached_property
    def pe_by_id(self) -> dict[str, PeSpec]:
        return {p.id: p for p in self.pes}

    def schedule_horizon(self) -> int:
        """First round from which the suspension schedule never changes again."""
        marks = [0]
        for pe in self.pes:
            for a, b in pe.suspended:
                marks.append(a)
                if b is not None:
                    marks.append(b)
        return max(marks)


@dataclass(frozen=True)
class SimState:
    round: int
    running: tuple[tuple[str, str], ...]  # sorted (task, PE id)
    active: tuple[Edge, ...]  # negators whose source ran in the previous round
    started: tuple[str, ...] = ()
    stopped: tuple[str, ...] = ()

    @property
    def running_map(self) -> dict[str, str]:
        return dict(self.running)

    @property
    def assigned(self) -> frozenset:
        return frozenset(t for t, _ in self.running)

    def fingerprint(self) -> tuple:
        return (self.running, self.active)


@dataclass(frozen=True)
class SimVerdict:
    kind: str  # stable | stalled | oscillating | inconclusive
    round: int
    period: int | None = None

    @property
    def cycle_start(self) -> int | None:
        return None if self.period is None else self.round - self.period

    def __str__(self) -> str:
        if self.kind == "oscillating":
            return f"oscillating(repeat@{self.round}, period={self.period})"
        return f"{self.kind}@{self.round}"


@dataclass(frozen=True)
class Trace:
    config: SimConfig
    states: tuple[SimState, ...]
    verdict: SimVerdict


def validate_config(config: SimConfig) -> list[str]:
    errors = []
    if config.mode not in MODES:
        errors.append(f"unknown mode {config.mode!r}")
    if config.max_rounds < 1:
        errors.append("max_rounds must be positive")
    ids = [p.id for p in config.pes]
    if len(set(ids)) != len(ids):
        errors.append("duplicate PE id")
    pes = config.pe_by_id
    for pe in config.pes:
        for t in sorted(pe.eligible):
            if t not in config.graph:
                errors.append(f"PE {pe.id!r} lists unknown task {t!r}")
        if pe.start_budget is not None and pe.start_budget < 0:
            errors.append(f"PE {pe.id!r} has a negative start budget")
    for task, pe_id in sorted(config.forced.items()):
        pe = pes.get(pe_id)
        if task not in config.graph:
            errors.append(f"forced task {task!r} is unknown")
        elif pe is None:
            errors.append(f"forced task {task!r} names unknown PE {pe_id!r}")
        elif task not in pe.eligible:
            errors.append(f"forced task {task!r} is not eligible on PE {pe_id!r}")
        elif pe.suspended_at(0):
            errors.append(f"forced task {task!r} is pinned to PE {pe_id!r}, suspended at round 0")
    return errors


def config_warnings(config: SimConfig) -> list[str]:
    return [
        f"task {s!r} negates itself; the simulator never stops a task for its own negator"
        for s, t in config.graph.negators
        if s == t
    ]


def initial_state(config: SimConfig) -> SimState:
    errors = validate_config(config)
    if errors:
        raise SimConfigError("; ".join(errors))
    running = tuple(sorted(config.forced.items()))
    return SimState(0, running, (), started=tuple(t for t, _ in running))


def step(state: SimState, config: SimConfig) -> SimState:
    g = config.graph
    rnd = state.round + 1
    running = state.running_map
    active = {(s, t) for s, t in g.negators if s in running}
    negated = {t for s, t in active if s != t}

    stopped = []
    for task in sorted(running):
        pe = config.pe_by_id[running[task]]
        if task in negated or pe.suspended_at(rnd):
            stopped.append(task)
    for task in stopped:
        del running[task]

    blocked = {t for _, t in active}
    budget_used: dict[str, int] = {}
    started = []
    for task in g.tasks:
        if task in running or task in blocked or task in stopped:
            continue
        pe = _free_pe(config, task, rnd, budget_used)
        if pe is None:
            continue
        running[task] = pe
        budget_used[pe] = budget_used.get(pe, 0) + 1
        started.append(task)
        if config.mode == "sequential":
            break
    return SimState(rnd, tuple(sorted(running.items())), tuple(sorted(active)), tuple(started), tuple(stopped))


def _free_pe(config: SimConfig, task: str, rnd: int, used: dict[str, int]) -> str | None:
    for pe in sorted(config.pes, key=lambda p: p.id):
        if task not in pe.eligible or pe.suspended_at(rnd):
            continue
        if pe.start_budget is not None and used.get(pe.id, 0) >= pe.start_budget:
            continue
        return pe.id
    return None


def _stalled(config: SimConfig, state: SimState) -> bool:
    """Some unassigned task that nothing can ever negate has eligible PEs but none it can use.

    Such a task belongs to every kernel, so the run is starved rather than
    settled. Tasks with an inbound negator may legitimately stay unassigned.
    """
    running = state.running_map
    negatable = {t for s, t in config.graph.negators if s != t}
    for task in config.graph.tasks:
        if task in running or task in negatable:
            continue
        pes = [p for p in config.pes if task in p.eligible]
        if pes and _free_pe(config, task, state.round + 1, {}) is None:
            return True
    return False


def run(config: SimConfig) -> Trace:
    state = initial_state(config)
    horizon = config.schedule_horizon()
    states = [state]
    seen: dict[tuple, int] = {}
    if state.round >= horizon:
        seen[state.fingerprint()] = state.round
    while state.round < config.max_rounds:
        state = step(state, config)
        fp = state.fingerprint()
        if state.round >= horizon and fp in seen:
            first = seen[fp]
            period = state.round - first
            if period == 1:
                kind = "stalled" if _stalled(config, states[-1]) else "stable"
                return Trace(config, tuple(states), SimVerdict(kind, first))
            states.append(state)
            return Trace(config, tuple(states), SimVerdict("oscillating", state.round, period))
        states.append(state)
        if state.round >= horizon:
            seen[fp] = state.round
    return Trace(config, tuple(states), SimVerdict("inconclusive", state.round))


def servable_tasks(config: SimConfig, rnd: int) -> frozenset:
    """Tasks with at least one eligible PE that is not suspended at ``rnd``."""
    return frozenset(t for p in config.pes if not p.suspended_at(rnd) for t in p.eligible)


def check_stable_trace(trace: Trace) -> bool:
    """Re-check a stable verdict on the subgraph of servable tasks."""
    cfg = trace.config
    final = trace.states[-1]
    universe = servable_tasks(cfg, final.round + 1)
    sub = TaskGraph.build(
        universe,
        [(s, t) for s, t in cfg.graph.negators if s in universe and t in universe],
    )
    return final.assigned <= universe and check_conditions(sub, final.assigned).ok


def _merge_intervals(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    out: list[list] = []
    for a, b in sorted(intervals, key=lambda iv: (iv[0], float("inf") if iv[1] is None else iv[1])):
        if out and (out[-1][1] is None or a <= out[-1][1]):
            if out[-1][1] is not None and (b is None or b > out[-1][1]):
                out[-1][1] = b
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


def suspend_pe(config: SimConfig, pe: str, start: int, stop: int | None = None) -> SimConfig:
    """Return a copy of ``config`` with ``pe`` suspended on rounds ``[start, stop)``."""
    if pe not in config.pe_by_id:
        raise SimConfigError(f"unknown PE {pe!r}")
    if start < 0 or (stop is not None and stop <= start):
        raise SimConfigError("suspension interval must satisfy 0 <= start < stop")
    pes = tuple(
        replace(p, suspended=_merge_intervals(p.suspended + ((start, stop),))) if p.id == pe else p
        for p in config.pes
    )
    return replace(config, pes=pes)


# -- rendering ---------------------------------------------------------------


def _annotations(trace: Trace) -> dict[int, str]:
    v = trace.verdict
    last = trace.states[-1].round
    if v.kind == "oscillating":
        notes = {r: "|" for r in range(v.cycle_start + 1, v.round)}
        notes[v.cycle_start] = "[ cycle"
        notes[v.round] = f"] repeats round {v.cycle_start}, period {v.period}"
        return notes
    return {last: f"{v.kind.upper()}@{v.round}"}


def render_trace(trace: Trace, fmt: str = "text") -> str:
    if fmt == "jsonl":
        lines = []
        for s in trace.states:
            rec = {
                "round": s.round,
                "running": [list(p) for p in s.running],
                "started": list(s.started),
                "stopped": list(s.stopped),
            }
            lines.append(json.dumps(rec))
        v = trace.verdict
        lines.append(json.dumps({"verdict": v.kind, "round": v.round, "period": v.period}))
        return "\n".join(lines) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown trace format {fmt!r}")
    pe_ids = sorted(p.id for p in trace.config.pes)
    header = ["round"] + pe_ids
    rows = []
    if trace.config.graph.tasks or trace.config.pes:
        notes = _annotations(trace)
        for s in trace.states:
            per_pe: dict[str, list[str]] = {p: [] for p in pe_ids}
            for task, pe in s.running:
                per_pe[pe].append(task)
            cells = [str(s.round)] + [",".join(per_pe[p]) or "-" for p in pe_ids]
            rows.append((cells, notes.get(s.round, "")))
    widths = [max([len(header[i])] + [len(c[i]) for c, _ in rows]) for i in range(len(header))]
    out = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for cells, note in rows:
        line = "  ".join(c.ljust(w) for c, w in zip(cells, widths))
        out.append((line + "  " + note).rstrip())
    return "\n".join(out) + "\n"


# -- simconfig-v1 documents --------------------------------------------------


def config_to_document(config: SimConfig) -> dict:
    return {
        "schema": SIM_SCHEMA,
        "graph": to_document(config.graph),
        "pes": [
            {
                "id": p.id,
                "eligible": sorted(p.eligible),
                **({"start_budget": p.start_budget} if p.start_budget is not None else {}),
            }
            for p in config.pes
        ],
        "mode": config.mode,
        "forced": {t: config.forced[t] for t in sorted(config.forced)},
        "suspend": [
            {"pe": p.id, "from": a, "to": b} for p in config.pes for a, b in p.suspended
        ],
        "max_rounds": config.max_rounds,
    }


def serialize_config(config: SimConfig) -> str:
    from .graph import dumps

    return dumps(config_to_document(config))


def _int(value, what: str, allow_none: bool = False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{what} must be an integer")
    return value


def parse_config(text: str, base_dir: str | Path | None = None) -> SimConfig:
    """Parse simconfig-v1; ``graph_file`` paths resolve against ``base_dir``."""
    doc = load_json(text)
    if not isinstance(doc, dict):
        raise FormatError("simulation config must be an object")
    if doc.get("schema", SIM_SCHEMA) != SIM_SCHEMA:
        raise FormatError(f"unsupported schema {doc.get('schema')!r}, expected {SIM_SCHEMA!r}")
    if "graph" in doc:
        graph = graph_from_document(doc["graph"])
    elif "graph_file" in doc:
        path = Path(base_dir or ".") / doc["graph_file"]
        try:
            graph = graph_from_document(load_json(path.read_text()))
        except OSError as exc:
            raise FormatError(f"cannot read graph_file: {exc}") from None
    else:
        raise FormatError("simulation config needs 'graph' or 'graph_file'")
    pes = []
    for i, item in enumerate(doc.get("pes", [])):
        if not isinstance(item, dict) or not isinstance(item.get("id"), str):
            raise FormatError(f"pes[{i}] must be an object with an 'id'")
        eligible = item.get("eligible", [])
        if eligible == "*":
            eligible = list(graph.tasks)
        if not isinstance(eligible, list) or not all(isinstance(t, str) for t in eligible):
            raise FormatError(f"pes[{i}].eligible must be a list of task names or '*'")
        budget = _int(item.get("start_budget"), f"pes[{i}].start_budget", allow_none=True)
        pes.append(PeSpec(item["id"], frozenset(eligible), start_budget=budget))
    forced = doc.get("forced", {})
    if not isinstance(forced, dict) or not all(isinstance(v, str) for v in forced.values()):
        raise FormatError("'forced' must map task names to PE ids")
    mode = doc.get("mode", "parallel")
    config = SimConfig(graph, tuple(pes), mode, dict(forced), _int(doc.get("max_rounds", 200), "max_rounds"))
    for i, item in enumerate(doc.get("suspend", [])):
        if not isinstance(item, dict):
            raise FormatError(f"suspend[{i}] must be an object")
        start = _int(item.get("from", 0), f"suspend[{i}].from")
        stop = _int(item.get("to"), f"suspend[{i}].to", allow_none=True)
        config = suspend_pe(config, item.get("pe"), start, stop)
    errors = validate_config(config)
    if errors:
        raise SimConfigError("; ".join(errors))
    return config


# -- scenario builders -------------------------------------------------------


def dedicated_pes(tasks: Iterable[str], prefix: str = "pe:") -> tuple[PeSpec, ...]:
    return tuple(PeSpec(f"{prefix}{t}", frozenset([t])) for t in sorted(tasks))


def circuit_config(
    graph: TaskGraph,
    high: Mapping[str, Iterable[Interval]],
    initial: Iterable[str] = (),
    mode: str = "parallel",
    max_rounds: int = 200,
) -> SimConfig:
    """One PE per task; each input task in ``high`` is only servable during its HIGH intervals.

    Inputs HIGH from round 0 and the ``initial`` tasks start forced at round 0.
    """
    pes = list(dedicated_pes(graph.tasks))
    forced = {t: f"pe:{t}" for t in initial}
    for task, intervals in high.items():
        graph.require(task)
        ivs = _merge_intervals(intervals)
        gaps, cursor = [], 0
        for a, b in ivs:
            if a > cursor:
                gaps.append((cursor, a))
            cursor = b
            if b is None:
                break
        if cursor is not None:
            gaps.append((cursor, None))
        pid = f"pe:{task}"
        pes = [replace(p, suspended=tuple(gaps)) if p.id == pid else p for p in pes]
        if ivs and ivs[0][0] == 0:
            forced[task] = pid
    return SimConfig(graph, tuple(pes), mode, forced, max_rounds)


_LITERAL = re.compile(r"^L(\d+)_\d+$")


def reduction_layout(graph: TaskGraph, roles: Mapping[str, str]) -> tuple[PeSpec, ...]:
    """PE rows as in the reference simulator setups.

    One PE per assignment task, per inverted-clause task, per join task and
    for ``A``/``B``; one PE per clause for its literal tasks; one shared PE
    for the oscillator triple ``X``/``Y``/``Z``.
    """
    rows: dict[str, set] = {}
    triple = {roles[k] for k in ("X", "Y", "Z") if k in roles}
    for t in graph.tasks:
        if t in triple:
            rows.setdefault("pe:XYZ", set()).add(t)
        elif m := _LITERAL.match(t):
            rows.setdefault(f"pe:C{int(m.group(1)):03d}", set()).add(t)
        else:
            rows.setdefault(f"pe:{t}", set()).add(t)
    return tuple(PeSpec(pid, frozenset(ts)) for pid, ts in sorted(rows.items()))


def reduction_scenario(
    graph: TaskGraph,
    roles: Mapping[str, str],
    interpretation: Mapping[int, bool] | None = None,
    mode: str = "sequential",
    max_rounds: int = 200,
) -> SimConfig:
    """Simulator setup for a reduced 3SAT instance, assignment tasks forced per ``interpretation``."""
    pes = reduction_layout(graph, roles)
    forced = {}
    for k, value in (interpretation or {}).items():
        task = f"P{k}" if value else f"N{k}"
        graph.require(task)
        forced[task] = f"pe:{task}"
    return SimConfig(graph, pes, mode, forced, max_rounds)
