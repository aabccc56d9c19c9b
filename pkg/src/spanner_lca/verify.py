"""Brute-force verification: materialize the implicit spanner and check it.

The materializer queries every edge in its own sealed probe session and
collects tallies; the checkers are deliberately independent of the query
algorithms (plain breadth-first searches and bit-parallel reachability over
the materialized edge set), so they can serve as oracles for the whp
guarantees: stretch, size shape, probe shape, and cross-query consistency.
"""

from __future__ import annotations

import random
import statistics
from collections import deque
from dataclasses import dataclass, field

from .graph import Graph
from .oracle import BudgetExceededError, ProbeOracle, sealed


@dataclass
class MaterializedSpanner:
    base: Graph = field(repr=False)
    kept: frozenset
    per_edge_probes: dict = field(repr=False)
    failure_events: int
    budget_violations: int

    @property
    def edge_count(self) -> int:
        return len(self.kept)

    @property
    def max_probes(self) -> int:
        return max((t.total for t in self.per_edge_probes.values()), default=0)

    @property
    def mean_probes(self) -> float:
        vals = [t.total for t in self.per_edge_probes.values()]
        return statistics.fmean(vals) if vals else 0.0


def materialize(lca, g: Graph, mode: str = "test", budget=None) -> MaterializedSpanner:
    """Query every edge once, each in a fresh sealed probe session.

    In test mode a budget is enforced by the oracle and blows up the run;
    in bench mode queries run unbudgeted and overruns are only counted.
    """
    if mode not in ("test", "bench"):
        raise ValueError(f"unknown mode {mode!r}")
    kept = []
    tallies = {}
    failures = 0
    overruns = 0
    enforce = budget if (mode == "test" and budget is not None) else None
    for u, v in g.edges():
        oracle = ProbeOracle(g, budget=enforce)
        try:
            outcome = lca.query(sealed(oracle), u, v)
        except BudgetExceededError:
            raise BudgetExceededError(
                f"edge ({u},{v}) exceeded probe budget {budget}") from None
        tally = oracle.tally
        tallies[(u, v)] = tally
        if budget is not None and tally.total > budget:
            overruns += 1
        failures += outcome.failures
        if outcome.keep:
            kept.append((u, v))
    return MaterializedSpanner(
        base=g,
        kept=frozenset(kept),
        per_edge_probes=tallies,
        failure_events=failures,
        budget_violations=overruns,
    )


# ---------------------------------------------------------------------------
# Stretch checking.  Primary path: bit-parallel BFS layers over the kept
# edges (each vertex's reachable set is one big int).  Cross-check oracle:
# a plain per-source BFS, used against the primary on small graphs.
# ---------------------------------------------------------------------------


def _kept_adjacency(g: Graph, kept) -> dict:
    hadj = {v: [] for v in g.vertices}
    for u, v in kept:
        hadj[u].append(v)
        hadj[v].append(u)
    return hadj


def reach_masks(g: Graph, kept, radius: int) -> tuple:
    """(index map, per-vertex bitmask of vertices within ``radius`` hops)."""
    order = list(g.vertices)
    pos = {v: i for i, v in enumerate(order)}
    hadj = _kept_adjacency(g, kept)
    nbr_idx = [[pos[w] for w in hadj[v]] for v in order]
    reach = [1 << i for i in range(len(order))]
    for _ in range(radius):
        nxt = []
        for i, row in enumerate(nbr_idx):
            acc = reach[i]
            for j in row:
                acc |= reach[j]
            nxt.append(acc)
        reach = nxt
    return pos, reach


def edge_stretches(g: Graph, kept, cap: int) -> dict:
    """Spanner distance of every base edge, layered up to ``cap`` rounds.

    Maps each edge to its distance in the kept subgraph, or None when the
    distance exceeds ``cap`` (including the disconnected case).
    """
    order = list(g.vertices)
    pos = {v: i for i, v in enumerate(order)}
    hadj = _kept_adjacency(g, kept)
    nbr_idx = [[pos[w] for w in hadj[v]] for v in order]
    reach = [1 << i for i in range(len(order))]
    dist = {}
    pending = []
    for u, v in g.edges():
        if (u, v) in kept:
            dist[(u, v)] = 1
        else:
            pending.append((u, v))
    for r in range(1, cap + 1):
        if not pending:
            break
        nxt = []
        for i, row in enumerate(nbr_idx):
            acc = reach[i]
            for j in row:
                acc |= reach[j]
            nxt.append(acc)
        reach = nxt
        still = []
        for u, v in pending:
            if reach[pos[u]] >> pos[v] & 1:
                dist[(u, v)] = r
            else:
                still.append((u, v))
        pending = still
    for e in pending:
        dist[e] = None
    return dist


def stretch_check(g: Graph, h, bound: int) -> list:
    """Violations [(u, v, dist)] where a base edge stretches past ``bound``.

    For subgraph spanners, bounding the detour of every omitted edge by
    ``bound`` certifies the bound for all vertex pairs (concatenate the
    per-edge detours along a shortest path).  Violating edges carry their
    exact detour, found by a full BFS; None means disconnected.
    """
    kept = h.kept if isinstance(h, MaterializedSpanner) else h
    dist = edge_stretches(g, kept, bound)
    suspects = [(u, v) for (u, v), d in dist.items() if d is None or d > bound]
    if not suspects:
        return []
    hadj = _kept_adjacency(g, kept)
    return [(u, v, bfs_distance(hadj, u, v)) for u, v in suspects]


def bfs_distance(adj: dict, src, dst, limit=None):
    """Plain BFS distance in an adjacency dict; None if unreachable."""
    if src == dst:
        return 0
    seen = {src}
    frontier = deque([(src, 0)])
    while frontier:
        x, d = frontier.popleft()
        if limit is not None and d >= limit:
            continue
        for w in adj[x]:
            if w in seen:
                continue
            if w == dst:
                return d + 1
            seen.add(w)
            frontier.append((w, d + 1))
    return None


def naive_stretch_check(g: Graph, kept, bound: int) -> list:
    """Independent per-edge BFS oracle; cross-checks the bitset path."""
    hadj = _kept_adjacency(g, kept)
    out = []
    for u, v in g.edges():
        d = bfs_distance(hadj, u, v)
        if d is None or d > bound:
            out.append((u, v, d))
    return out


def components(adj: dict) -> list:
    seen = set()
    comps = []
    for v in adj:
        if v in seen:
            continue
        comp = {v}
        seen.add(v)
        stack = [v]
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def preserves_components(g: Graph, kept) -> bool:
    """A spanner passing any finite stretch bound must also pass this."""
    gadj = {v: [w for w in g.neighbors[v]] for v in g.vertices}
    comp_g = {frozenset(c) for c in components(gadj)}
    comp_h = {frozenset(c) for c in components(_kept_adjacency(g, kept))}
    return comp_g == comp_h


# ---------------------------------------------------------------------------
# Consistency and constant fitting.
# ---------------------------------------------------------------------------


def consistency_check(factory, g: Graph, seed: int, trials: int = 2,
                      orders: int = 5, shuffle_seed: int = 0) -> bool:
    """Independently built instances must agree edge-by-edge, in any order."""
    if trials < 2:
        raise ValueError("need at least 2 trials")
    edges = list(g.edges())
    baseline = None
    rng = random.Random(shuffle_seed)
    for t in range(trials):
        for _ in range(orders):
            lca = factory(seed)
            order = edges[:]
            rng.shuffle(order)
            answers = {}
            for u, v in order:
                answers[(u, v)] = lca.query(sealed(ProbeOracle(g)), u, v).keep
            if baseline is None:
                baseline = answers
            elif answers != baseline:
                return False
    return True


def fit_constant(runs) -> float:
    """C = max over (shape_value, observed) pairs of observed / shape_value."""
    runs = list(runs)
    if not runs:
        raise ValueError("no runs to fit")
    return max(obs / shape for shape, obs in runs)


def make_report(algo: str, g: Graph, spanner: MaterializedSpanner,
                stretch_bound: int, seed: int, param, constants: dict) -> dict:
    """Machine-readable verification report with a stable field order.

    Edge stretches are resolved exactly up to ``stretch_bound``; anything
    past that (disconnection included) reports max_stretch "inf" and shows
    up in the violation list.
    """
    dist = edge_stretches(g, spanner.kept, stretch_bound)
    violations = [(u, v, d) for (u, v), d in dist.items() if d is None]
    finite = [d for d in dist.values() if d is not None]
    max_stretch = "inf" if violations else (max(finite) if finite else 0)
    return {
        "algo": algo,
        "n": g.n,
        "m": g.m,
        "k_or_r": param,
        "seed": seed,
        "edge_count": spanner.edge_count,
        "max_stretch": max_stretch,
        "stretch_violations": [
            {"u": u, "v": v, "dist": d} for u, v, d in violations
        ],
        "max_probes": spanner.max_probes,
        "mean_probes": round(spanner.mean_probes, 3),
        "failure_events": spanner.failure_events,
        "budget_violations": spanner.budget_violations,
        "constants": dict(sorted(constants.items())),
    }
