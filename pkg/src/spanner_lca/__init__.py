"""Local computation algorithms for graph spanners over a probe oracle."""

from .common import NotAnEdgeError, QueryOutcome
from .graph import Graph, build_from_edge_list, generate, read_graph, validate, write_graph
from .k2_dense import K2Spanner
from .oracle import BudgetExceededError, ProbeOracle, ProbeTally, UnknownVertexError, sealed, with_budget
from .spanner3 import Spanner3
from .spanner5 import Spanner5

__all__ = [
    "BudgetExceededError",
    "Graph",
    "K2Spanner",
    "NotAnEdgeError",
    "ProbeOracle",
    "ProbeTally",
    "QueryOutcome",
    "Spanner3",
    "Spanner5",
    "UnknownVertexError",
    "build_from_edge_list",
    "generate",
    "read_graph",
    "sealed",
    "validate",
    "with_budget",
    "write_graph",
]
