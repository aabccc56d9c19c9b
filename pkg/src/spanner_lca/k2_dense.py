"""Dense side of the O(k^2)-spanner query algorithm, plus the dispatcher.

Dense vertices (a sampled center within distance k) are partitioned into
Voronoi cells by first-discovered center; the capped BFS's lexicographic
tie-breaking makes every shortest path to the chosen center stay inside
one cell, so the union of those paths forms a depth-<=k tree per cell.
Tree edges are kept outright.

Cells are refined into clusters of at most 2L vertices by subtree size: a
light cell is one cluster, heavy vertices (subtree larger than L) are
singletons, and the light children of a heavy vertex are greedily grouped,
in adjacency-list order, into runs of subtrees totalling L to 2L vertices.
Cell centers are independently marked with bias ~1/L, and edges between
clusters survive by three rules evaluated in both orientations:

  (1) the near side is a marked cluster and the edge is the minimum-id
      edge between the two clusters;
  (2) the far side is adjacent to no marked cluster and the edge is the
      minimum-id edge from it to the near side's whole cell;
  (3) some marked cluster C has the far side participating in its
      cluster-of-clusters, the far cell's rank is among the q lowest in
      the common boundary-center set of the near cluster and C, and the
      edge is the minimum-id edge from the near cluster to the far cell.

Ranks are the block-concatenated bounded-independence ranks, one block per
stretch round.  Queries with a sparse endpoint route to the sparse
simulation; a dense vertex whose capped search exposes no center (a
whp-excluded hitting failure) falls back to YES with a failure mark.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import randomness as rnd
from .common import NotAnEdgeError, QueryOutcome
from .k2_sparse import (BfsResult, Fetcher, K2Params, bfs_explore,
                        is_sparse_from, local_sparse_decision,
                        make_phase_coins)

WHOLE_CELL = "WHOLE_CELL"
SINGLETON_HEAVY = "SINGLETON_HEAVY"
SUBTREE_GROUP = "SUBTREE_GROUP"

_HEAVY = -1  # sentinel in the subtree-size memo


class OrphanVertexError(RuntimeError):
    """Dense-classified vertex with no center in its capped search."""


@dataclass(frozen=True)
class VoronoiAssignment:
    vertex: object
    center: object
    path: tuple  # vertex ... center, consecutive entries adjacent in G


@dataclass(frozen=True)
class Cluster:
    kind: str
    members: tuple  # ID-sorted, <= 2L of them, all in one cell
    home_center: object
    anchor: object = None  # (heavy parent, group index) for SUBTREE_GROUP

    def key(self):
        return (self.home_center, self.members)


class _DenseSession:
    __slots__ = ("fetch", "flags", "bfs", "assign", "size", "children",
                 "cluster", "boundary")

    def __init__(self, oracle):
        self.fetch = Fetcher(oracle)
        self.flags = {}
        self.bfs = {}
        self.assign = {}
        self.size = {}
        self.children = {}
        self.cluster = {}
        self.boundary = {}


class K2Spanner:
    algo_name = "k2"

    def __init__(self, n: int, id_bits: int, seed: int, k: int,
                 constants=None):
        self.params = K2Params.make(n, id_bits, k, constants)
        self.seed_value = seed
        p = self.params
        master = rnd.MasterSeed(seed)
        self._h_center = master.draw_hash("k2/center", id_bits,
                                          rnd.bias_beta(p.p_center), p.d)
        self._h_mark = master.draw_hash("k2/mark", id_bits,
                                        rnd.bias_beta(p.p_mark), p.d)
        self.phase_coin = make_phase_coins(master, p)
        self.ranks = rnd.draw_ranks(master, "k2/rank", n, p.k, gamma=id_bits,
                                    d=p.d)
        self.master = master
        self._centers: dict = {}
        self._marks: dict = {}
        self._rankmemo: dict = {}

    def is_center(self, vid) -> bool:
        r = self._centers.get(vid)
        if r is None:
            r = self._centers[vid] = self._h_center.eval(vid) == 0
        return r

    def cell_marked(self, center_id) -> bool:
        r = self._marks.get(center_id)
        if r is None:
            r = self._marks[center_id] = self._h_mark.eval(center_id) == 0
        return r

    def rank_key(self, center_id) -> tuple:
        """Ordering key: block-concatenated rank, ties by id."""
        r = self._rankmemo.get(center_id)
        if r is None:
            r = self._rankmemo[center_id] = (self.ranks.rank(center_id),
                                             center_id)
        return r

    # -- classification and Voronoi machinery ------------------------------

    def _bfs(self, sess, v) -> BfsResult:
        res = sess.bfs.get(v)
        if res is None:
            res = sess.bfs[v] = bfs_explore(sess.fetch, v, self.params,
                                            self.is_center)
        return res

    def sparse_flag(self, sess, v) -> bool:
        f = sess.flags.get(v)
        if f is None:
            f = sess.flags[v] = is_sparse_from(self._bfs(sess, v), self.params)
        return f

    def center_of(self, oracle, v, sess=None) -> VoronoiAssignment:
        sess = sess or _DenseSession(oracle)
        got = sess.assign.get(v)
        if got is not None:
            return got
        if self.sparse_flag(sess, v):
            raise ValueError(f"center_of on sparse vertex {v}")
        res = self._bfs(sess, v)
        if res.found_center is None:
            raise OrphanVertexError(v)
        got = sess.assign[v] = VoronoiAssignment(
            vertex=v, center=res.found_center[0], path=res.path_to_center())
        return got

    def _center_or_none(self, sess, v):
        """Cell center of v, or None when v is sparse or orphaned."""
        if self.sparse_flag(sess, v):
            return None
        try:
            return self.center_of(None, v, sess).center
        except OrphanVertexError:
            return None

    def voronoi_children(self, oracle, v, sess=None) -> list:
        sess = sess or _DenseSession(oracle)
        got = sess.children.get(v)
        if got is not None:
            return got
        own = self.center_of(None, v, sess)
        kids = []
        for w in sess.fetch(v):  # adjacency-list order, kept for grouping
            if self._center_or_none(sess, w) != own.center:
                continue
            path = self.center_of(None, w, sess).path
            if len(path) >= 2 and path[1] == v:
                kids.append(w)
        sess.children[v] = kids
        return kids

    def subtree_size_or_heavy(self, oracle, v, sess=None):
        """Number of tree descendants of v inclusive, or "HEAVY" past L."""
        sess = sess or _DenseSession(oracle)
        got = sess.size.get(v)
        if got is not None:
            return "HEAVY" if got == _HEAVY else got
        L = self.params.L
        count = 0
        stack = [v]
        heavy = False
        while stack:
            x = stack.pop()
            count += 1
            if count > L:
                heavy = True
                break
            stack.extend(self.voronoi_children(None, x, sess))
        sess.size[v] = _HEAVY if heavy else count
        return "HEAVY" if heavy else count

    def _subtree_members(self, sess, v) -> list:
        out = []
        stack = [v]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self.voronoi_children(None, x, sess))
        return out

    def cluster_of(self, oracle, v, sess=None) -> Cluster:
        sess = sess or _DenseSession(oracle)
        got = sess.cluster.get(v)
        if got is not None:
            return got
        s = self.center_of(None, v, sess).center
        if self.subtree_size_or_heavy(None, s, sess) != "HEAVY":
            members = tuple(sorted(self._subtree_members(sess, s)))
            clu = Cluster(WHOLE_CELL, members, s)
        elif self.subtree_size_or_heavy(None, v, sess) == "HEAVY":
            clu = Cluster(SINGLETON_HEAVY, (v,), s)
        else:
            path = self.center_of(None, v, sess).path
            j = 1
            while self.subtree_size_or_heavy(None, path[j], sess) != "HEAVY":
                j += 1
            parent = path[j]
            below = path[j - 1]
            groups = []
            acc, acc_size = [], 0
            L = self.params.L
            for w in self.voronoi_children(None, parent, sess):
                sz = self.subtree_size_or_heavy(None, w, sess)
                if sz == "HEAVY":
                    continue
                acc.append(w)
                acc_size += sz
                if acc_size >= L:
                    groups.append(acc)
                    acc, acc_size = [], 0
            if acc:
                groups.append(acc)
            for gi, group in enumerate(groups):
                if below in group:
                    members = []
                    for w in group:
                        members.extend(self._subtree_members(sess, w))
                    clu = Cluster(SUBTREE_GROUP, tuple(sorted(members)), s,
                                  anchor=(parent, gi))
                    break
            else:  # pragma: no cover - grouping always covers the child
                raise RuntimeError(f"cluster grouping missed {v}")
        for x in clu.members:
            sess.cluster[x] = clu
        return clu

    # -- boundary scans ------------------------------------------------------

    def _boundary(self, sess, clu: Cluster) -> dict:
        got = sess.boundary.get(clu.key())
        if got is not None:
            return got
        member_set = set(clu.members)
        centers = set()
        min_edge = {}
        marked_adjacent = False
        own_marked = self.cell_marked(clu.home_center)
        for x in clu.members:
            for y in sess.fetch(x):
                if y in member_set:
                    continue
                cy = self._center_or_none(sess, y)
                if cy is None:
                    continue  # sparse or orphaned neighbors join no cell
                if cy == clu.home_center:
                    if own_marked:
                        marked_adjacent = True  # sibling cluster, same cell
                    continue
                centers.add(cy)
                if self.cell_marked(cy):
                    marked_adjacent = True
                e = (x, y)
                best = min_edge.get(cy)
                if best is None or e < best:
                    min_edge[cy] = e
        got = sess.boundary[clu.key()] = {
            "centers": centers,
            "min_edge": min_edge,
            "marked_adjacent": marked_adjacent,
        }
        return got

    # -- spanner membership rules ---------------------------------------------

    def query_denseI(self, oracle, u, v, sess=None) -> bool:
        """Voronoi tree edges: one endpoint is the other's tree parent."""
        sess = sess or _DenseSession(oracle)
        pu = self.center_of(None, u, sess).path
        pv = self.center_of(None, v, sess).path
        return (len(pv) >= 2 and pv[1] == u) or (len(pu) >= 2 and pu[1] == v)

    def _rule3(self, sess, A, B, bound_A, bound_B, target) -> bool:
        cb = B.home_center
        q = self.params.q
        for sm in sorted(bound_B["centers"]):
            if not self.cell_marked(sm):
                continue
            ex, ey = bound_B["min_edge"][sm]
            C = self.cluster_of(None, ey, sess)  # B participates in C(C)
            bound_C = self._boundary(sess, C)
            common = bound_A["centers"] & bound_C["centers"]
            if cb not in common:
                continue
            ordered = sorted(common, key=self.rank_key)
            if ordered.index(cb) >= q:
                continue
            if bound_A["min_edge"].get(cb) == target:
                return True
        return False

    def query_denseB(self, oracle, u, v, sess=None) -> bool:
        sess = sess or _DenseSession(oracle)
        A = self.cluster_of(None, u, sess)
        B = self.cluster_of(None, v, sess)
        bound_A = self._boundary(sess, A)
        bound_B = self._boundary(sess, B)
        for near, far, bn, bf, t_near, t_far in (
            (A, B, bound_A, bound_B, (u, v), (v, u)),
            (B, A, bound_B, bound_A, (v, u), (u, v)),
        ):
            # (1) marked cluster keeps its minimum edge to each neighbor.
            if self.cell_marked(near.home_center):
                far_set = set(far.members)
                best = None
                for x in near.members:
                    for y in sess.fetch(x):
                        if y in far_set:
                            e = (x, y)
                            if best is None or e < best:
                                best = e
                if best == t_near:
                    return True
            # (2) a cluster seeing no marked cluster connects to every cell.
            if not bf["marked_adjacent"]:
                if bf["min_edge"].get(near.home_center) == t_far:
                    return True
            # (3) rank-limited connection through a marked cluster-of-clusters.
            if self._rule3(sess, near, far, bn, bf, t_near):
                return True
        return False

    def query_sparse(self, oracle, u, v, sess=None) -> bool:
        """Ball-local simulation of the k-phase clustering construction;
        at least one endpoint must be sparse."""
        sess = sess or _DenseSession(oracle)
        if not (self.sparse_flag(sess, u) or self.sparse_flag(sess, v)):
            raise ValueError(f"({u},{v}) has no sparse endpoint")
        return local_sparse_decision(
            sess.fetch, u, v, self.params, self.is_center,
            self.phase_coin, lambda x: self.sparse_flag(sess, x))

    # -- dispatcher -------------------------------------------------------------

    def query(self, oracle, u, v) -> QueryOutcome:
        sess = _DenseSession(oracle)
        if v not in sess.fetch(u):
            raise NotAnEdgeError((u, v))
        if self.sparse_flag(sess, u) or self.sparse_flag(sess, v):
            return QueryOutcome(self.query_sparse(None, u, v, sess))
        try:
            cu = self.center_of(None, u, sess).center
            cv = self.center_of(None, v, sess).center
        except OrphanVertexError:
            return QueryOutcome(True, failures=1)
        if self.query_denseI(None, u, v, sess):
            return QueryOutcome(True)
        if cu == cv:
            return QueryOutcome(False)  # intra-cell detour via the tree
        try:
            return QueryOutcome(self.query_denseB(None, u, v, sess))
        except OrphanVertexError:
            return QueryOutcome(True, failures=1)
