"""Sparse side of the O(k^2)-spanner query algorithm.

A vertex is *sparse* when its distance-k ball holds no sampled center; by
the hitting-set argument such balls are small (under L vertices whp), so a
capped breadth-first search both classifies a vertex and, for dense ones,
finds the first discovered center.  The BFS dequeues one vertex at a time,
probes its whole neighbor list, and enqueues unseen neighbors in increasing
id order; discovery order is therefore by distance with ties broken by the
lexicographically-first shortest path from the origin.

Edges with a sparse endpoint are decided by simulating, inside the gathered
k-balls of the two endpoints, a k-phase randomized clustering spanner
construction in the style of Baswana-Sen: every vertex starts as its own
cluster, each phase samples surviving cluster centers with bias n^{-1/k},
unsampled vertices join the lowest-id sampled neighboring cluster (keeping
the connecting edge) after connecting once to every lower-id cluster, and
vertices with no sampled neighbor connect to all adjacent clusters and
retire.  The final phase samples nothing.  All coins are per-phase hashes
of cluster-center ids, so a global run and a ball-local simulation see the
same randomness; the global runner lives here too and doubles as the
locality oracle in the verification suite.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from . import randomness as rnd

DEFAULT_CONSTANTS = {
    "c_L": 2.0,       # exploration cap multiplier over n^{1/3}
    "c_center": 0.7,  # center bias multiplier: p = c log n / L
    "c_q": 1.0,       # rank-rule width multiplier
    "c_mark": 1.0,    # cell marking bias multiplier over 1/L
    "budget_mult": 3.0,
}


@dataclass(frozen=True)
class K2Params:
    n: int
    id_bits: int
    k: int
    L: int
    p_center: float
    p_mark: float
    q: int
    d: int
    constants: dict = field(repr=False)

    @classmethod
    def make(cls, n: int, id_bits: int, k: int, constants=None):
        if k < 1:
            raise ValueError("k must be >= 1")
        cons = dict(DEFAULT_CONSTANTS)
        if constants:
            cons.update(constants)
        lg = max(1, (max(2, n) - 1).bit_length())
        k = min(k, lg)  # larger k gains nothing: the spanner is near-linear
        L = max(2, math.ceil(cons["c_L"] * n ** (1.0 / 3.0)))
        return cls(
            n=n,
            id_bits=id_bits,
            k=k,
            L=L,
            p_center=min(1.0, cons["c_center"] * lg / L),
            p_mark=min(1.0, cons["c_mark"] / L),
            q=max(1, math.ceil(cons["c_q"] * n ** (1.0 / k) * lg)),
            d=rnd.independence_order(n),
            constants=cons,
        )

    def probe_budget(self, max_deg: int) -> int:
        shape = max_deg ** 4 * self.n ** (2.0 / 3.0)
        return math.ceil(self.constants["budget_mult"] * shape) + 16


@dataclass(frozen=True)
class BfsResult:
    origin: object
    discovered: tuple            # discovery order, origin first
    tree_parent: dict            # child -> predecessor toward the origin
    found_center: object         # (center, distance) or None
    frontier_exhausted: bool     # stopped by radius/queue, not by the cap
    dists: dict = field(repr=False, default_factory=dict)

    def path_to_center(self) -> tuple:
        """Origin-to-center path along lexicographically-first parents."""
        if self.found_center is None:
            raise ValueError(f"no center discovered from {self.origin}")
        node = self.found_center[0]
        back = [node]
        while node != self.origin:
            node = self.tree_parent[node]
            back.append(node)
        return tuple(reversed(back))


class Fetcher:
    """Session-scoped full-neighborhood reads: one DEGREE plus deg NEIGHBOR
    probes per vertex, charged on first touch only."""

    __slots__ = ("oracle", "cache")

    def __init__(self, oracle):
        self.oracle = oracle
        self.cache = {}

    def __call__(self, v) -> tuple:
        row = self.cache.get(v)
        if row is None:
            o = self.oracle
            d = o.degree(v)
            row = tuple(o.neighbor(v, i) for i in range(1, d + 1))
            self.cache[v] = row
        return row


def bfs_explore(fetch, v, params: K2Params, is_center) -> BfsResult:
    """Capped center search: stop at L discovered vertices, at the first
    dequeued radius-k vertex, or when the component is exhausted."""
    L, k = params.L, params.k
    dist = {v: 0}
    order = [v]
    parent = {}
    found = (v, 0) if is_center(v) else None
    queue = deque([v])
    capped = len(order) >= L
    while queue and not capped:
        u = queue.popleft()
        du = dist[u]
        if du >= k:
            break
        fresh = sorted(w for w in fetch(u) if w not in dist)
        for w in fresh:
            dist[w] = du + 1
            parent[w] = u
            order.append(w)
            if found is None and is_center(w):
                found = (w, du + 1)
            if len(order) >= L:
                capped = True
                break
        if capped:
            break
        queue.extend(fresh)
    return BfsResult(origin=v, discovered=tuple(order), tree_parent=parent,
                     found_center=found, frontier_exhausted=not capped,
                     dists=dist)


def is_sparse_from(result: BfsResult, params: K2Params) -> bool:
    return (len(result.discovered) < params.L
            and result.found_center is None)


def is_sparse(fetch, v, params: K2Params, is_center) -> bool:
    return is_sparse_from(bfs_explore(fetch, v, params, is_center), params)


# ---------------------------------------------------------------------------
# The k-phase clustering construction.  ``phase_coin(i, c)`` answers whether
# cluster center c survives the sampling of phase i (always False at i = k).
# ---------------------------------------------------------------------------


def make_phase_coins(master: rnd.MasterSeed, params: K2Params):
    bias = min(1.0, params.n ** (-1.0 / params.k))
    funcs = {}
    for i in range(1, params.k):
        funcs[i] = master.draw_hash(f"k2/phase{i}", params.id_bits,
                                    rnd.bias_beta(bias), params.d)
    memo = {}

    def phase_coin(i: int, c) -> bool:
        if i >= params.k:
            return False
        key = (i, c)
        got = memo.get(key)
        if got is None:
            got = memo[key] = funcs[i].eval(c) == 0
        return got

    return phase_coin


def _phase_step(x, prev_cluster, sparse_neighbors, phase_coin, i):
    """One vertex's phase-i transition: (next_cluster, edges_added_by_x).

    ``prev_cluster`` maps vertices to their phase-(i-1) centers (None once
    retired); ``sparse_neighbors`` lists x's neighbors in the sparse graph.
    """
    c = prev_cluster(x)
    if c is None:
        return None, ()
    if phase_coin(i, c):
        return c, ()
    by_cluster = {}
    for w in sparse_neighbors(x):
        cw = prev_cluster(w)
        if cw is not None and cw != c:
            best = by_cluster.get(cw)
            if best is None or w < best:
                by_cluster[cw] = w
    added = []
    nxt = None
    for cw in sorted(by_cluster):
        added.append((x, by_cluster[cw]))
        if phase_coin(i, cw):
            nxt = cw
            break
    return nxt, tuple(added)


def local_sparse_decision(fetch, u, v, params: K2Params, is_center,
                          phase_coin, sparse_flag) -> bool:
    """Simulate the k phases inside the gathered balls and report whether
    either endpoint keeps the edge (u, v).

    ``sparse_flag`` memoizes per-vertex sparse tests; at least one of u, v
    must be sparse, which bounds the gathered region by the usual ball
    containment argument.
    """
    k = params.k

    sparse_adj_memo = {}

    def sparse_neighbors(x):
        row = sparse_adj_memo.get(x)
        if row is None:
            if sparse_flag(x):
                row = fetch(x)
            else:
                row = tuple(w for w in fetch(x) if sparse_flag(w))
            sparse_adj_memo[x] = row
        return row

    cluster_memo = {}

    def cluster_at(x, i):
        if i == 0:
            return x
        key = (x, i)
        got = cluster_memo.get(key, "?")
        if got != "?":
            return got
        nxt, _ = _phase_step(x, lambda y: cluster_at(y, i - 1),
                             sparse_neighbors, phase_coin, i)
        cluster_memo[key] = nxt
        return nxt

    def adds(x, y) -> bool:
        if y not in sparse_neighbors(x):
            return False
        for i in range(1, k + 1):
            _, added = _phase_step(x, lambda z: cluster_at(z, i - 1),
                                   sparse_neighbors, phase_coin, i)
            if (x, y) in added:
                return True
        return False

    return adds(u, v) or adds(v, u)


def global_sparse_spanner(g, sparse_flags: dict, params: K2Params,
                          phase_coin) -> set:
    """Round-by-round run of the same construction on the whole sparse
    graph; the verification suite holds this against the ball-local
    simulation, edge for edge."""
    sadj = {}
    for x in g.vertices:
        if sparse_flags[x]:
            sadj[x] = tuple(g.neighbors[x])
        else:
            sadj[x] = tuple(w for w in g.neighbors[x] if sparse_flags[w])
    cluster = {x: x for x in g.vertices}
    kept = set()
    for i in range(1, params.k + 1):
        prev = dict(cluster)
        nxt = {}
        for x in g.vertices:
            c, added = _phase_step(x, prev.get, lambda y: sadj[y],
                                   phase_coin, i)
            nxt[x] = c
            for a, b in added:
                kept.add((min(a, b), max(a, b)))
        cluster = nxt
    return kept


def compute_global_sparse_flags(g, params: K2Params, is_center) -> dict:
    """Direct per-vertex evaluation of the operational sparse test."""
    flags = {}

    def fetch(v):
        return g.neighbors[v]

    for v in g.vertices:
        flags[v] = is_sparse(fetch, v, params, is_center)
    return flags
