import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from negators.graph import TaskGraph  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA = Path(__file__).resolve().parent.parent / "data"

_acceptance_lines: list[str] = []


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def report(number: int, title: str, ok: bool, detail: str = "") -> None:
        status = "PASS" if ok else "FAIL"
        _acceptance_lines.append(f"[{status}] AC{number} {title}" + (f" ({detail})" if detail else ""))
        assert ok, f"AC{number} {title}: {detail}"

    return report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split("AC")[1].split()[0])):
            terminalreporter.write_line(line)


@st.composite
def task_graphs(draw, max_tasks=8, self_loops=False, comms=True):
    n = draw(st.integers(0, max_tasks))
    names = [f"t{i}" for i in range(n)]
    pairs = [(a, b) for a in names for b in names if self_loops or a != b]
    negators = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    comm_pairs = [(a, b) for a in names for b in names if a != b]
    comm_edges = draw(st.lists(st.sampled_from(comm_pairs), unique=True)) if comms and comm_pairs else []
    return TaskGraph.build(names, negators, comm_edges)


@st.composite
def formulas(draw, max_vars=4, max_clauses=4, max_width=3):
    n = draw(st.integers(1, max_vars))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=max_width), max_size=max_clauses))
    return n, clauses
