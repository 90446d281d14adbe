"""Negator task graphs: deciders, reductions, logic gadgets and a round-based simulator."""

from .deciders import (
    Verdict,
    brute_force_decide,
    decide_negpath,
    decide_negsat,
    decide_negstab,
    encode_kernel_cnf,
)
from .graph import (
    ConditionReport,
    FormatError,
    GraphError,
    TaskGraph,
    check_conditions,
    parse,
    path_exists,
    serialize,
    to_dot,
    validate_graph,
)
from .reductions import (
    negsat_to_negpath,
    negsat_to_negstab,
    threesat_to_negpath,
    threesat_to_negsat,
)
from .sat import CnfFormula, enumerate_models, parse_dimacs, solve

__version__ = "0.1.0"

__all__ = [
    "CnfFormula",
    "ConditionReport",
    "FormatError",
    "GraphError",
    "TaskGraph",
    "Verdict",
    "brute_force_decide",
    "check_conditions",
    "decide_negpath",
    "decide_negsat",
    "decide_negstab",
    "encode_kernel_cnf",
    "enumerate_models",
    "negsat_to_negpath",
    "negsat_to_negstab",
    "parse",
    "parse_dimacs",
    "path_exists",
    "serialize",
    "solve",
    "threesat_to_negpath",
    "threesat_to_negsat",
    "to_dot",
    "validate_graph",
]
