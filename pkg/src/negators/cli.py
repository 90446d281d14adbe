"""Command-line interface: ``negators decide|reduce|simulate|circuit|export|gen``.

Exit codes: 0 yes/success/stable, 1 no/oscillating, 2 usage or input error,
3 simulation inconclusive or stalled.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import circuits, deciders, reductions, sim
from .generate import random_cnf, random_graph
from .graph import FormatError, GraphError, parse_document, serialize, to_dot
from .sat import DimacsError, parse_dimacs, to_dimacs

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _record(rec: dict) -> str:
    return json.dumps(rec) + "\n"


def _names(csv: str | None) -> list[str]:
    return [x for x in (csv or "").split(",") if x]


def cmd_decide(args) -> int:
    g, _ = parse_document(_read(args.graph))
    kw: dict = {}
    if args.problem == "negsat":
        if not args.task:
            raise UsageError("negsat needs --task")
        kw["task"] = args.task
    elif args.problem == "negpath":
        if not (args.source and args.target):
            raise UsageError("negpath needs --from and --to")
        kw.update(source=args.source, target=args.target)
    if args.engine == "brute":
        kw["cap"] = args.cap
    verdict = deciders.decide(args.problem, g, engine=args.engine, **kw)
    sys.stdout.write(_record(verdict.to_record(witness=args.witness, timing=args.timing)))
    return EXIT_YES if verdict.answer else EXIT_NO


def cmd_reduce(args) -> int:
    text = _read(args.input)
    kind = args.kind
    if kind.startswith("3sat"):
        f = parse_dimacs(text)
        red = reductions.threesat_to_negsat(f) if kind == "3sat-to-negsat" else reductions.threesat_to_negpath(f)
    else:
        g, _ = parse_document(text)
        if not args.task:
            raise UsageError(f"{kind} needs --task")
        fn = reductions.negsat_to_negpath if kind == "negsat-to-negpath" else reductions.negsat_to_negstab
        red = fn(g, args.task)
    doc = serialize(red.graph, **red.document_extras())
    summary = _record(
        {
            "reduction": kind,
            "tasks": len(red.graph.tasks),
            "negators": len(red.graph.negators),
            "comms": len(red.graph.comms),
        }
    )
    if args.out:
        Path(args.out).write_text(doc)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(doc)
        sys.stderr.write(summary)
    return EXIT_YES


def cmd_simulate(args) -> int:
    config = sim.parse_config(_read(args.config), base_dir=Path(args.config).parent)
    if args.mode:
        config = replace(config, mode=args.mode)
    if args.max_rounds:
        config = replace(config, max_rounds=args.max_rounds)
    for warning in sim.config_warnings(config):
        sys.stderr.write(f"warning: {warning}\n")
    trace = sim.run(config)
    sys.stdout.write(sim.render_trace(trace, args.format))
    if args.out:
        Path(args.out).write_text(sim.render_trace(trace, "jsonl"))
    kind = trace.verdict.kind
    if kind == "stable":
        return EXIT_YES
    if kind == "oscillating":
        return EXIT_NO
    return EXIT_INCONCLUSIVE


def cmd_circuit(args) -> int:
    kind = args.kind
    if kind == "nor":
        out = circuits.nor_gadget(_names(args.inputs), args.output or "C")
    elif kind == "mutex":
        out = circuits.mutex_gadget(args.var or "x")
    elif kind == "sr-latch":
        out = circuits.sr_latch()
    elif kind == "ring":
        out = circuits.ring_oscillator(args.n)
    elif kind == "compile":
        if not args.file:
            raise UsageError("compile needs a netlist file")
        out = circuits.compile_netlist(circuits.parse_netlist(_read(args.file)))
    else:  # cnf-nor
        if not args.file:
            raise UsageError("cnf-nor needs a DIMACS file")
        out = circuits.cnf_to_two_stage_nor(parse_dimacs(_read(args.file)), with_mutex=not args.no_mutex)
    _emit(serialize(out.graph, io={k: out.io[k] for k in sorted(out.io)}), args.out)
    return EXIT_YES


def cmd_export(args) -> int:
    g, _ = parse_document(_read(args.graph))
    assigned = None
    if args.verdict:
        rec = json.loads(_read(args.verdict).splitlines()[0])
        assigned = rec.get("witness", [])
    elif args.assigned is not None:
        assigned = _names(args.assigned)
    _emit(to_dot(g, assigned), args.out)
    return EXIT_YES


def cmd_gen(args) -> int:
    if args.kind == "graph":
        g = random_graph(args.tasks, args.negator_density, args.comm_density, args.seed, args.self_loops)
        text = serialize(g)
    elif args.kind == "cnf":
        f = random_cnf(args.vars, args.clauses, args.width, args.seed)
        text = to_dimacs(f, comments=[f"random cnf seed={args.seed}"])
    else:
        text = _scenario(args)
    _emit(text, args.out)
    return EXIT_YES


def _scenario(args) -> str:
    if not args.cnf:
        raise UsageError("gen scenario needs --cnf")
    f = parse_dimacs(_read(args.cnf))
    problem = args.problem
    if problem == "negpath":
        red = reductions.threesat_to_negpath(f)
        graph, roles = red.graph, red.roles
    else:
        red = reductions.threesat_to_negsat(f)
        graph, roles = red.graph, red.roles
        if problem == "negstab":
            stab = reductions.negsat_to_negstab(graph, "A")
            graph, roles = stab.graph, {**roles, **stab.roles}
    bits = _names(args.interpretation)
    if bits and len(bits) != f.num_vars:
        raise UsageError(f"--interpretation needs {f.num_vars} comma-separated 0/1 values")
    interp = {k: b == "1" for k, b in enumerate(bits, 1)}
    config = sim.reduction_scenario(graph, roles, interp or None, args.mode, args.max_rounds)
    return sim.serialize_config(config)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="negators", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="decide NegStab / NegSat / NegPath")
    d.add_argument("problem", choices=deciders.PROBLEMS)
    d.add_argument("graph", help="taskgraph-v1 file ('-' for stdin)")
    d.add_argument("--task")
    d.add_argument("--from", dest="source")
    d.add_argument("--to", dest="target")
    d.add_argument("--engine", choices=deciders.ENGINES, default="sat")
    d.add_argument("--witness", action="store_true", help="print the assignment (and path)")
    d.add_argument("--cap", type=int, default=deciders.DEFAULT_CAP, help="brute-force task cap")
    d.add_argument("--timing", action="store_true", help="include elapsed seconds")
    d.set_defaults(func=cmd_decide)

    r = sub.add_parser("reduce", help="run a reduction")
    r.add_argument("kind", choices=reductions.REDUCTIONS)
    r.add_argument("input", help="DIMACS file for 3sat-*, taskgraph-v1 otherwise")
    r.add_argument("--task")
    r.add_argument("--out")
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("simulate", help="run the round-based simulator")
    s.add_argument("config", help="simconfig-v1 file")
    s.add_argument("--mode", choices=sim.MODES)
    s.add_argument("--max-rounds", type=int)
    s.add_argument("--format", choices=("text", "jsonl"), default="text")
    s.add_argument("--out", help="also write the line-per-round trace here")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("circuit", help="emit a logic gadget as a task graph")
    c.add_argument("kind", choices=("nor", "mutex", "sr-latch", "ring", "compile", "cnf-nor"))
    c.add_argument("file", nargs="?", help="netlist-v1 (compile) or DIMACS (cnf-nor)")
    c.add_argument("--inputs", default="A,B")
    c.add_argument("--output")
    c.add_argument("--var")
    c.add_argument("--n", type=int, default=3)
    c.add_argument("--no-mutex", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=cmd_circuit)

    e = sub.add_parser("export", help="render a task graph as Graphviz DOT")
    e.add_argument("graph")
    e.add_argument("--assigned", help="comma-separated assigned tasks")
    e.add_argument("--verdict", help="decide output whose witness to highlight")
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)

    gp = sub.add_parser("gen", help="seeded random instances and simulator scenarios")
    gp.add_argument("kind", nargs="?", choices=("graph", "cnf", "scenario"), default="graph")
    gp.add_argument("--tasks", type=int, default=10)
    gp.add_argument("--negator-density", type=float, default=0.2)
    gp.add_argument("--comm-density", type=float, default=0.0)
    gp.add_argument("--self-loops", action="store_true")
    gp.add_argument("--vars", type=int, default=3)
    gp.add_argument("--clauses", type=int, default=3)
    gp.add_argument("--width", type=int, default=3)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--cnf", help="scenario: DIMACS source formula")
    gp.add_argument("--problem", choices=deciders.PROBLEMS, default="negsat")
    gp.add_argument("--interpretation", help="scenario: forced values, e.g. 0,0,1")
    gp.add_argument("--mode", choices=sim.MODES, default="sequential")
    gp.add_argument("--max-rounds", type=int, default=200)
    gp.add_argument("--out")
    gp.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        UsageError,
        FormatError,
        GraphError,
        DimacsError,
        deciders.CapExceeded,
        circuits.NetlistError,
        sim.SimConfigError,
        ValueError,
    ) as exc:
        sys.stderr.write(f"negators {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
