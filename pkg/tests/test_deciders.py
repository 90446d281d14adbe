import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import task_graphs
from negators.deciders import (
    CapExceeded,
    brute_force_decide,
    count_kernels,
    decide,
    decide_negpath,
    decide_negsat,
    decide_negstab,
    encode_kernel_cnf,
    verify_verdict,
)
from negators.generate import random_graph
from negators.graph import GraphError, TaskGraph, check_conditions
from negators.reductions import triangle
from negators.sat import enumerate_models

ENGINES = ("brute", "sat")


@pytest.mark.parametrize("engine", ENGINES)
def test_triangle_has_no_kernel(engine):
    v = decide_negstab(triangle(), engine=engine)
    assert not v and v.witness is None


@pytest.mark.parametrize("engine", ENGINES)
def test_two_cycle_negsat(engine):
    g = TaskGraph.build(["A", "B"], [("A", "B"), ("B", "A")])
    v = decide_negsat(g, "A", engine=engine)
    assert v and v.witness == {"A"}


@pytest.mark.parametrize("engine", ENGINES)
def test_negpath_blocked_by_negator(engine):
    g = TaskGraph.build(["A", "B", "C"], [("C", "B")], [("A", "B")])
    # C has no negator sources, so it is always assigned and B never is
    assert not decide_negpath(g, "A", "B", engine=engine)
    assert decide_negpath(g, "A", "A", engine=engine)


@pytest.mark.parametrize("engine", ENGINES)
def test_empty_graph(engine):
    v = decide_negstab(TaskGraph.build([]), engine=engine)
    assert v and v.witness == frozenset()


@pytest.mark.parametrize("engine", ENGINES)
def test_unknown_task_is_an_error(engine):
    with pytest.raises(GraphError):
        decide_negsat(triangle(), "Q", engine=engine)


def test_brute_cap():
    g = random_graph(12, 0.2, 0.0, seed=1)
    with pytest.raises(CapExceeded):
        brute_force_decide("negstab", g, cap=10)
    assert brute_force_decide("negstab", g, cap=12).engine == "brute"


def test_brute_witness_is_lowest_mask():
    g = TaskGraph.build(["a", "b"], [("a", "b"), ("b", "a")])
    # masks: {a}=1, {b}=2; both kernels
    v = brute_force_decide("negstab", g)
    assert v.witness == {"a"} and v.examined == 2


def test_unknown_problem_and_engine():
    with pytest.raises(ValueError):
        decide("negfoo", triangle())
    with pytest.raises(ValueError):
        decide("negstab", triangle(), engine="quantum")


def test_record_is_deterministic_without_timing():
    rec = decide_negstab(triangle()).to_record()
    assert "elapsed" not in rec and rec["answer"] == "no"
    assert "elapsed" in decide_negstab(triangle()).to_record(timing=True)


@given(task_graphs(max_tasks=8, self_loops=True), st.data())
def test_engines_match_oracle(g, data):
    if not g.tasks:
        return
    a = data.draw(st.sampled_from(g.tasks))
    b = data.draw(st.sampled_from(g.tasks))
    expected = {
        "negstab": oracles.negstab(g.tasks, g.negators),
        "negsat": oracles.negsat(g.tasks, g.negators, a),
        "negpath": oracles.negpath(g.tasks, g.negators, g.comms, a, b),
    }
    kw = {"negstab": {}, "negsat": {"task": a}, "negpath": {"source": a, "target": b}}
    for problem, answer in expected.items():
        for engine in ENGINES:
            v = decide(problem, g, engine=engine, **kw[problem])
            assert v.answer == answer, (problem, engine)
            assert verify_verdict(g, v, **kw[problem])


@given(task_graphs(max_tasks=8, self_loops=True), st.data())
def test_relaxation_chain(g, data):
    """NegPath yes implies NegSat yes for the source implies NegStab yes."""
    if not g.tasks:
        return
    a = data.draw(st.sampled_from(g.tasks))
    b = data.draw(st.sampled_from(g.tasks))
    if decide_negpath(g, a, b):
        assert decide_negsat(g, a)
    if decide_negsat(g, a):
        assert decide_negstab(g)


@given(task_graphs(max_tasks=8, self_loops=True))
def test_cnf_models_are_exactly_the_kernels(g):
    f, var = encode_kernel_cnf(g)
    models = enumerate_models(f, 1 << (len(g.tasks) + 1))
    kernels = {frozenset(t for t in g.tasks if m[var[t]]) for m in models}
    assert kernels == set(oracles.all_kernels(g.tasks, g.negators))
    assert len(models) == count_kernels(g)
    for k in kernels:
        assert check_conditions(g, k).ok
