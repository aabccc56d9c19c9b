"""Adjacency-list probe oracle: the only access path to the graph for LCAs.

Three probes are exposed -- NEIGHBOR, DEGREE, ADJACENCY -- each costing
exactly one unit.  A fresh oracle is created per query session so tallies
are per-query; answers are pure reads of the immutable graph, so sessions
never interact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph


class UnknownVertexError(KeyError):
    """Probe addressed a vertex that is not in the graph."""


class BudgetExceededError(RuntimeError):
    """A probe was attempted past the configured budget."""


@dataclass(frozen=True)
class ProbeTally:
    neighbor_count: int
    degree_count: int
    adjacency_count: int

    @property
    def total(self) -> int:
        return self.neighbor_count + self.degree_count + self.adjacency_count


class ProbeOracle:
    """Per-session probe counter over a shared immutable graph.

    NEIGHBOR and ADJACENCY indices are 1-based.  Out-of-range or
    non-adjacent lookups answer ``None``; unknown vertices raise, which is
    deliberately distinct from the in-model ``None`` answer.
    """

    __slots__ = ("_nbrs", "_index", "neighbor_count", "degree_count",
                 "adjacency_count", "_remaining")

    def __init__(self, graph: Graph, budget=None):
        self._nbrs = graph.neighbors
        self._index = graph.index_of
        self.neighbor_count = 0
        self.degree_count = 0
        self.adjacency_count = 0
        if budget is not None and budget < 0:
            raise ValueError("budget must be >= 0")
        self._remaining = budget

    def neighbor(self, v, i: int):
        """i-th neighbor of v (1-based), or None when i > deg(v)."""
        r = self._remaining
        if r is not None:
            if r == 0:
                raise BudgetExceededError("probe budget exhausted")
            self._remaining = r - 1
        self.neighbor_count += 1
        row = self._nbrs.get(v)
        if row is None:
            raise UnknownVertexError(v)
        if 1 <= i <= len(row):
            return row[i - 1]
        return None

    def degree(self, v) -> int:
        r = self._remaining
        if r is not None:
            if r == 0:
                raise BudgetExceededError("probe budget exhausted")
            self._remaining = r - 1
        self.degree_count += 1
        row = self._nbrs.get(v)
        if row is None:
            raise UnknownVertexError(v)
        return len(row)

    def adjacency(self, u, v):
        """Index of v inside u's list (1-based), or None if not adjacent."""
        r = self._remaining
        if r is not None:
            if r == 0:
                raise BudgetExceededError("probe budget exhausted")
            self._remaining = r - 1
        self.adjacency_count += 1
        pos = self._index.get(u)
        if pos is None or v not in self._nbrs:
            raise UnknownVertexError(u if pos is None else v)
        return pos.get(v)

    @property
    def tally(self) -> ProbeTally:
        return ProbeTally(self.neighbor_count, self.degree_count,
                          self.adjacency_count)


def with_budget(graph: Graph, limit: int) -> ProbeOracle:
    """Fresh oracle whose probes past ``limit`` raise BudgetExceededError."""
    return ProbeOracle(graph, budget=limit)


class SealedOracle:
    """Probe-only facade: nothing but the three probes and the tally.

    The proxy stores pre-bound probe methods, so query code written against
    it can reach neither the graph nor the raw oracle through attributes,
    and probing costs the same as on the bare oracle.  The verifier runs
    every query behind this facade.
    """

    __slots__ = ("neighbor", "degree", "adjacency", "_tally")

    def __init__(self, oracle: ProbeOracle):
        self.neighbor = oracle.neighbor
        self.degree = oracle.degree
        self.adjacency = oracle.adjacency
        self._tally = lambda: oracle.tally

    @property
    def tally(self) -> ProbeTally:
        return self._tally()


def sealed(oracle: ProbeOracle) -> SealedOracle:
    return SealedOracle(oracle)
