"""Ground-truth graph representation, validation, generators, and file I/O.

The graph is immutable after construction: simple, undirected, with a fixed
per-vertex adjacency order.  Vertex labels are opaque non-negative integers
and need not form a contiguous range.  Query algorithms never touch this
module directly; they go through the probe oracle.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field


class GraphError(ValueError):
    """Rejected construction input (self-loop, duplicate edge, bad vertex)."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with fixed-order adjacency lists.

    ``adj[v]`` is the ordered list of ``(neighbor, reverse_index)`` pairs,
    where ``reverse_index`` is the 0-based position of ``v`` inside the
    neighbor's own list.  ``neighbors`` and ``index_of`` are derived fast
    paths: plain neighbor lists, and 1-based position maps used to answer
    adjacency probes in O(1).
    """

    n: int
    vertices: tuple
    adj: dict
    m: int
    neighbors: dict = field(repr=False)
    index_of: dict = field(repr=False)
    edge_seq: tuple = field(repr=False, default=())

    def degree(self, v) -> int:
        return len(self.neighbors[v])

    def has_edge(self, u, v) -> bool:
        return v in self.index_of[u]

    def edges(self):
        """Each edge once, as (min_id, max_id)."""
        for u in self.vertices:
            for w in self.neighbors[u]:
                if u < w:
                    yield (u, w)

    def max_id_bits(self) -> int:
        top = max(self.vertices) if self.vertices else 0
        return max(1, int(top).bit_length())


def _finish(n, vertices, adj_ids, edge_seq=()):
    """Attach reverse indices and derived lookup tables."""
    index_of = {}
    for v in vertices:
        pos = {}
        for i, w in enumerate(adj_ids[v]):
            if w == v:
                raise GraphError(f"self-loop at vertex {v}")
            if w in pos:
                raise GraphError(f"duplicate edge ({v},{w})")
            pos[w] = i + 1
        index_of[v] = pos
    adj = {}
    m2 = 0
    for v in vertices:
        row = []
        for w in adj_ids[v]:
            if w not in index_of:
                raise GraphError(f"unknown vertex {w} referenced from {v}")
            j = index_of[w].get(v)
            if j is None:
                raise GraphError(f"one-sided edge ({v},{w})")
            row.append((w, j - 1))
        adj[v] = tuple(row)
        m2 += len(row)
    return Graph(
        n=n,
        vertices=tuple(vertices),
        adj=adj,
        m=m2 // 2,
        neighbors={v: tuple(adj_ids[v]) for v in vertices},
        index_of=index_of,
        edge_seq=tuple(edge_seq),
    )


def build_from_edge_list(n, edges, ids=None) -> Graph:
    """Build a graph over ``n`` vertices from unordered id pairs.

    Adjacency order is the order of first appearance in ``edges``.  Vertex
    ids default to 0..n-1; pass ``ids`` to use another label set.  Rejects
    self-loops, duplicate pairs, and endpoints outside the vertex set.
    """
    vertices = list(range(n)) if ids is None else list(ids)
    if len(vertices) != n or len(set(vertices)) != n:
        raise GraphError("vertex id list must contain n distinct labels")
    known = set(vertices)
    adj_ids = {v: [] for v in vertices}
    seen = set()
    for u, v in edges:
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        if u not in known or v not in known:
            raise GraphError(f"unknown vertex in edge ({u},{v})")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphError(f"duplicate edge ({u},{v})")
        seen.add(key)
        adj_ids[u].append(v)
        adj_ids[v].append(u)
    return _finish(n, vertices, adj_ids, edge_seq=edges)


def validate(g: Graph) -> list:
    """Return a list of invariant violations (empty iff the graph is sound).

    Violations are data, not errors: corrupted instances built by hand in
    tests flow through here and come back with named offenders.
    """
    out = []
    seen_ids = set(g.vertices)
    if len(seen_ids) != g.n or len(g.vertices) != g.n:
        out.append(f"vertex count mismatch: n={g.n}, distinct ids={len(seen_ids)}")
    deg_sum = 0
    for v in g.vertices:
        row = g.adj.get(v)
        if row is None:
            out.append(f"missing adjacency row for {v}")
            continue
        deg_sum += len(row)
        seen_nbrs = set()
        for i, (w, rev) in enumerate(row):
            if w == v:
                out.append(f"self-loop at {v}")
                continue
            if w in seen_nbrs:
                out.append(f"parallel edge ({v},{w})")
            seen_nbrs.add(w)
            if w not in g.adj:
                out.append(f"unknown neighbor {w} at ({v},{i + 1})")
                continue
            back = g.adj[w]
            if not (0 <= rev < len(back)) or back[rev][0] != v or back[rev][1] != i:
                out.append(f"cross-index violation at ({v},{i + 1})")
    if deg_sum != 2 * g.m:
        out.append(f"degree sum {deg_sum} != 2m ({2 * g.m})")
    return out


# ---------------------------------------------------------------------------
# Generators.  Deterministic per (model, parameters, gen_seed); vertex ids are
# a random injection into [4n] and every adjacency list is shuffled, so tests
# exercise arbitrary id spaces and arbitrary neighbor orderings.
# ---------------------------------------------------------------------------


def _rng(gen_seed: int, *tags) -> random.Random:
    text = "|".join(str(t) for t in (gen_seed,) + tags)
    digest = hashlib.sha256(text.encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _assemble(n, pair_edges, rng) -> Graph:
    ids = rng.sample(range(4 * n), n)
    adj_ids = {v: [] for v in ids}
    seq = []
    for a, b in pair_edges:
        adj_ids[ids[a]].append(ids[b])
        adj_ids[ids[b]].append(ids[a])
        seq.append((ids[a], ids[b]))
    for v in ids:
        rng.shuffle(adj_ids[v])
    return _finish(n, ids, adj_ids, edge_seq=seq)


def gen_gnp(n: int, p: float, gen_seed: int) -> Graph:
    """Erdos-Renyi G(n, p) via geometric skipping."""
    if n < 1 or not (0.0 <= p <= 1.0):
        raise GraphError(f"infeasible gnp parameters n={n}, p={p}")
    rng = _rng(gen_seed, "gnp", n, repr(p))
    pairs = []
    if p >= 1.0:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    elif p > 0.0:
        lp = math.log(1.0 - p)
        v, w = 1, -1
        while v < n:
            w += 1 + int(math.log(1.0 - rng.random()) / lp)
            while w >= v and v < n:
                w -= v
                v += 1
            if v < n:
                pairs.append((v, w))
    return _assemble(n, pairs, rng)


def gen_regular(n: int, d: int, gen_seed: int) -> Graph:
    """Random d-regular graph: stub pairing plus conflict repair by swaps."""
    if d < 0 or d >= n or (n * d) % 2 != 0:
        raise GraphError(f"infeasible regular parameters n={n}, d={d}")
    rng = _rng(gen_seed, "regular", n, d)
    if d == 0:
        return _assemble(n, [], rng)
    for _ in range(50):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        pairs = [[stubs[2 * i], stubs[2 * i + 1]] for i in range(len(stubs) // 2)]
        owner = {}  # edge key -> index of the conflict-free pair holding it
        bad = []
        for idx, (a, b) in enumerate(pairs):
            key = (a, b) if a < b else (b, a)
            if a == b or key in owner:
                bad.append(idx)
            else:
                owner[key] = idx
        tries = 400 * (len(bad) + 1)
        while bad and tries:
            tries -= 1
            i = bad[-1]
            j = rng.randrange(len(pairs))
            a, b = pairs[i]
            c, e = pairs[j]
            kj = (c, e) if c < e else (e, c)
            if j == i or owner.get(kj) != j or a == e or c == b:
                continue
            k1 = (a, e) if a < e else (e, a)
            k2 = (c, b) if c < b else (b, c)
            if k1 == k2 or k1 in owner or k2 in owner:
                continue
            del owner[kj]
            owner[k1] = i
            owner[k2] = j
            pairs[i] = [a, e]
            pairs[j] = [c, b]
            bad.pop()
        if not bad:
            return _assemble(n, [tuple(p) for p in pairs], rng)
    raise GraphError(f"regular({n},{d}) generation did not converge")


def gen_clustered(n: int, blocks: int, gen_seed: int) -> Graph:
    """Hub-centered community blocks with heterogeneous degrees.

    Each of ``blocks`` communities carries one hub; every member links to a
    few random hubs (its own included) and to random peers inside its block.
    Hubs end up with degree near n, members land in a mid-degree band with a
    hub-heavy adjacency prefix for roughly half of them.
    """
    if blocks < 1 or blocks * 2 > n:
        raise GraphError(f"infeasible clustered parameters n={n}, blocks={blocks}")
    rng = _rng(gen_seed, "clustered", n, blocks)
    hub_links = min(blocks, 1 + math.ceil(n ** (1.0 / 3.0) / 2.0))
    size = n // blocks
    hubs = [b * size for b in range(blocks)]
    hub_set = set(hubs)
    pairs = set()
    for v in range(n):
        if v in hub_set:
            continue
        own = min(v // size, blocks - 1)
        linked = {hubs[own]}
        while len(linked) < hub_links:
            linked.add(hubs[rng.randrange(blocks)])
        for h in linked:
            pairs.add((min(v, h), max(v, h)))
    target_intra = math.ceil(n ** (1.0 / 3.0))
    members = [v for v in range(n) if v not in hub_set]
    by_block = {}
    for v in members:
        by_block.setdefault(min(v // size, blocks - 1), []).append(v)
    for block in by_block.values():
        k = len(block)
        if k < 2:
            continue
        p_in = min(1.0, target_intra / max(1, k - 1))
        for i in range(k):
            for j in range(i + 1, k):
                if rng.random() < p_in:
                    pairs.add((block[i], block[j]))
    return _assemble(n, sorted(pairs), rng)


_GENERATORS = {"gnp": gen_gnp, "regular": gen_regular, "clustered": gen_clustered}


def generate(model: str, gen_seed: int, **params) -> Graph:
    """Dispatch on model name: gnp(n, p), regular(n, d), clustered(n, blocks)."""
    if model not in _GENERATORS:
        raise GraphError(f"unknown model {model!r}")
    return _GENERATORS[model](gen_seed=gen_seed, **params)


# ---------------------------------------------------------------------------
# Text edge-list format: line 1 is "n m", then m lines "ID(u) ID(v)".
# '#' starts a comment.  Adjacency order equals file order, so graphs built
# from an edge sequence round-trip exactly; a generator-shuffled graph
# serializes to its generation sequence and reloads with file-order
# adjacency (same edge set).  Vertices that appear in no edge are
# re-labelled with fresh ids on read.
# ---------------------------------------------------------------------------


def write_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        emitted = set()
        for u, w in g.edge_seq:
            key = (min(u, w), max(u, w))
            if key not in emitted:
                emitted.add(key)
                fh.write(f"{u} {w}\n")
        for u in g.vertices:  # safety net for hand-built Graph objects
            for w in g.neighbors[u]:
                key = (min(u, w), max(u, w))
                if key not in emitted:
                    emitted.add(key)
                    fh.write(f"{u} {w}\n")


def read_graph(path) -> Graph:
    with open(path) as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError(f"bad header {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    edges = []
    for ln in lines[1 : m + 1]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if len(edges) != m:
        raise GraphError(f"expected {m} edges, found {len(edges)}")
    ids = []
    seen = set()
    for u, v in edges:
        for x in (u, v):
            if x not in seen:
                seen.add(x)
                ids.append(x)
    if len(ids) > n:
        raise GraphError(f"{len(ids)} distinct endpoints exceed declared n={n}")
    nxt = max(ids, default=-1) + 1
    while len(ids) < n:
        ids.append(nxt)
        nxt += 1
    return build_from_edge_list(n, edges, ids=ids)
