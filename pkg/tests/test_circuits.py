from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from negators.circuits import (
    Gate,
    Netlist,
    NetlistError,
    cnf_to_two_stage_nor,
    compile_netlist,
    mutex_gadget,
    nor_gadget,
    parse_netlist,
    ring_oscillator,
    serialize_netlist,
    sr_latch,
    stable_extensions,
)
from negators.deciders import count_kernels, decide_negstab
from negators.graph import TaskGraph, check_conditions
from negators.reductions import threesat_to_negsat, triangle
from negators.sat import CnfFormula
from negators.sim import circuit_config, initial_state, run, step

F = CnfFormula(3, [[-1, -2, -3], [1, 2, 3]])
FOREVER = [(0, None)]


def _levels(high: bool):
    return FOREVER if high else []


@pytest.mark.parametrize("a,b", list(product([False, True], repeat=2)))
def test_nor_truth_table_stable_semantics(a, b):
    g = nor_gadget(["A", "B"], "C").graph
    (ext,) = stable_extensions(g, {"A": a, "B": b})
    assert ("C" in ext) == (not a and not b)


@pytest.mark.parametrize("a,b", list(product([False, True], repeat=2)))
def test_nor_truth_table_in_simulation(a, b):
    g = nor_gadget(["A", "B"], "C").graph
    trace = run(circuit_config(g, {"A": _levels(a), "B": _levels(b)}))
    assert trace.verdict.kind in ("stable", "stalled")
    assert ("C" in trace.states[-1].assigned) == (not a and not b)


def test_nor_single_input_is_inverter():
    g = nor_gadget(["A"], "C").graph
    assert stable_extensions(g, {"A": True}) == [frozenset({"A"})]
    assert stable_extensions(g, {"A": False}) == [frozenset({"C"})]


def test_nor_three_inputs_low():
    g = nor_gadget(["A", "B", "D"], "C").graph
    assert stable_extensions(g, dict.fromkeys("ABD", False)) == [frozenset({"C"})]


def test_nor_errors():
    with pytest.raises(ValueError):
        nor_gadget(["A", "B"], "A")
    with pytest.raises(ValueError):
        nor_gadget([], "C")


def test_mutex_kernels():
    g = mutex_gadget("P", "N").graph
    assert set(oracles.all_kernels(g.tasks, g.negators)) == {frozenset({"P"}), frozenset({"N"})}
    assert not check_conditions(g, {"P", "N"}).stable
    assert not check_conditions(g, set()).maximal
    assert mutex_gadget("x").graph.tasks == ("x", "~x")


def _latch_run(s_high, r_high, rounds, initial=("~Q",)):
    cfg = circuit_config(sr_latch().graph, {"S": s_high, "R": r_high}, initial=initial, max_rounds=rounds)
    states = [initial_state(cfg)]
    while states[-1].round < rounds:
        states.append(step(states[-1], cfg))
    return states


def test_sr_latch_wiring():
    g = sr_latch().graph
    assert set(g.negators) == {("Q", "~Q"), ("~Q", "Q"), ("S", "~Q"), ("R", "Q")}


def test_sr_latch_set_then_reset_and_hold():
    states = _latch_run([(5, 7)], [(70, 72)], 140)
    after_set = states[7 + 10].assigned
    assert "Q" in after_set and "~Q" not in after_set
    # holds with S, R idle for at least 50 rounds
    for s in states[9:70]:
        assert "Q" in s.assigned and "~Q" not in s.assigned
    for s in states[74:141]:
        assert "~Q" in s.assigned and "Q" not in s.assigned


def test_sr_latch_both_held():
    states = _latch_run([(5, 30)], [(5, 30)], 30)
    for s in states[8:30]:
        assert not {"Q", "~Q"} & s.assigned


@pytest.mark.parametrize("n", [3, 5, 7])
def test_odd_ring_has_no_kernel(n):
    g = ring_oscillator(n).graph
    assert len(g.tasks) == n and len(g.negators) == n
    assert not decide_negstab(g, engine="brute")
    assert not decide_negstab(g, engine="sat")


@pytest.mark.parametrize("n", [4, 6])
def test_even_cycle_negative_control(n):
    names = [f"R{i}" for i in range(n)]
    g = TaskGraph.build(names, [(names[i], names[(i + 1) % n]) for i in range(n)])
    assert decide_negstab(g, engine="brute") and decide_negstab(g, engine="sat")
    assert count_kernels(g) == 2
    with pytest.raises(ValueError):
        ring_oscillator(n)


def test_ring_three_is_the_triangle():
    g = ring_oscillator(3).graph
    rename = {"R0": "X", "R1": "Z", "R2": "Y"}
    assert TaskGraph.build(rename.values(), [(rename[s], rename[t]) for s, t in g.negators]) == triangle()


def test_ring_three_simulates_period_two():
    trace = run(circuit_config(ring_oscillator(3).graph, {}))
    assert trace.verdict.kind == "oscillating" and trace.verdict.period == 2
    levels = {len(s.assigned) for s in trace.states[1:]}
    assert levels == {0, 3}


def test_compile_inverter_loops(data_dir):
    ring = compile_netlist(parse_netlist((data_dir / "three-inverter-ring.json").read_text()))
    assert ring.graph == ring_oscillator(3).graph
    loop = compile_netlist(parse_netlist((data_dir / "two-inverter-loop.json").read_text())).graph
    assert len(loop.tasks) == 2 and {(t, s) for s, t in loop.negators} == set(loop.negators)


def test_compile_latch_netlist_equals_gadget(data_dir):
    latch = compile_netlist(parse_netlist((data_dir / "sr-latch-nor.json").read_text()))
    assert latch.graph == sr_latch().graph


def test_compile_double_inverter():
    nl = Netlist(("a",), (Gate("INV", ("a",), "b"), Gate("INV", ("b",), "c")), ("c",))
    g = compile_netlist(nl).graph
    assert g.negators == (("a", "b"), ("b", "c"))
    for level in (False, True):
        (ext,) = stable_extensions(g, {"a": level})
        assert ("c" in ext) == level


def test_compile_errors():
    with pytest.raises(NetlistError, match="dangling"):
        compile_netlist(Netlist(("a",), (Gate("NOR", ("a", "zz"), "b"),)))
    with pytest.raises(NetlistError, match="more than once"):
        compile_netlist(Netlist(("a",), (Gate("INV", ("a",), "a"),)))


def test_netlist_round_trip():
    nl = Netlist(("a", "b"), (Gate("NOR", ("a", "b"), "c"),), ("c",))
    assert parse_netlist(serialize_netlist(nl)) == nl


def test_two_stage_nor_matches_reduction():
    out = cnf_to_two_stage_nor(F)
    assert out.graph == threesat_to_negsat(F).graph
    assert [t for t in out.graph.tasks if t.startswith("IC")] == ["IC1", "IC2"]
    assert out.io["A"] == "A" and out.io["~x1"] == "N1"


def test_two_stage_nor_without_mutex_allows_conflict():
    g = cnf_to_two_stage_nor(F, with_mutex=False).graph
    assert any({"P1", "N1"} <= k for k in oracles.all_kernels(g.tasks, g.negators))


def test_two_stage_nor_empty_formula():
    g = cnf_to_two_stage_nor(CnfFormula(0, [])).graph
    assert g.tasks == ("A",)
    assert stable_extensions(g, {}) == [frozenset({"A"})]


@given(st.data())
def test_two_stage_nor_evaluates_formula(data):
    n = data.draw(st.integers(1, 3))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = data.draw(st.lists(st.lists(lit, min_size=1, max_size=3), max_size=3))
    f = CnfFormula(n, clauses)
    g = cnf_to_two_stage_nor(f, with_mutex=False).graph
    for bits in product([False, True], repeat=n):
        forced = {}
        for k, b in enumerate(bits, 1):
            forced[f"P{k}"], forced[f"N{k}"] = b, not b
        (ext,) = stable_extensions(g, forced)
        assert ("A" in ext) == f.evaluate(dict(enumerate(bits, 1)))


@st.composite
def acyclic_netlists(draw):
    k = draw(st.integers(1, 4))
    inputs = [f"i{j}" for j in range(k)]
    nets = list(inputs)
    gates = []
    for j in range(draw(st.integers(1, 5))):
        kind = draw(st.sampled_from(["NOR", "INV"]))
        size = 1 if kind == "INV" else draw(st.integers(1, min(3, len(nets))))
        ins = draw(st.lists(st.sampled_from(nets), min_size=size, max_size=size, unique=True))
        gates.append(Gate(kind, tuple(ins), f"g{j}"))
        nets.append(f"g{j}")
    return Netlist(tuple(inputs), tuple(gates), (nets[-1],))


@given(acyclic_netlists())
def test_acyclic_netlist_semantics(nl):
    g = compile_netlist(nl).graph
    for levels in product([False, True], repeat=len(nl.inputs)):
        expected = oracles.eval_netlist(nl.inputs, [(x.kind, x.inputs, x.output) for x in nl.gates], levels)
        exts = stable_extensions(g, dict(zip(nl.inputs, levels)))
        assert len(exts) == 1
        assert {n for n, v in expected.items() if v} == set(exts[0])
