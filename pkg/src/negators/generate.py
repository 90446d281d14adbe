"""Seeded random instances for property tests and the ``gen`` subcommand."""

from __future__ import annotations

import numpy as np

from .graph import TaskGraph
from .sat import CnfFormula


def task_names(n: int, prefix: str = "T") -> list[str]:
    width = max(2, len(str(max(n - 1, 0))))
    return [f"{prefix}{i:0{width}d}" for i in range(n)]


def random_graph(
    n: int,
    negator_density: float = 0.2,
    comm_density: float = 0.0,
    seed: int | np.random.Generator | None = 0,
    self_loops: bool = False,
) -> TaskGraph:
    """Each ordered pair becomes a negator / comm edge independently with the given density."""
    rng = np.random.default_rng(seed)
    names = task_names(n)
    neg = rng.random((n, n)) < negator_density
    com = rng.random((n, n)) < comm_density
    if not self_loops:
        np.fill_diagonal(neg, False)
    np.fill_diagonal(com, False)
    negators = [(names[i], names[j]) for i, j in zip(*np.nonzero(neg))]
    comms = [(names[i], names[j]) for i, j in zip(*np.nonzero(com))]
    return TaskGraph.build(names, negators, comms)


def random_cnf(
    num_vars: int,
    num_clauses: int,
    max_width: int = 3,
    seed: int | np.random.Generator | None = 0,
    min_width: int = 1,
) -> CnfFormula:
    """Clauses of ``min_width..max_width`` distinct variables with random signs."""
    rng = np.random.default_rng(seed)
    max_width = min(max_width, num_vars)
    min_width = min(min_width, max_width)
    clauses = []
    for _ in range(num_clauses):
        width = int(rng.integers(min_width, max_width + 1))
        variables = rng.choice(np.arange(1, num_vars + 1), size=width, replace=False)
        signs = rng.choice([-1, 1], size=width)
        clauses.append(sorted((int(v * s) for v, s in zip(variables, signs)), key=abs))
    return CnfFormula(num_vars, clauses)
