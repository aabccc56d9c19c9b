"""Edge-query algorithm deciding membership in a fixed 5-spanner.

Vertices split by degree at LowDeg = n^{1/r}, MedDeg = n^{1/2-1/(2r)} and
SuperDeg = n^{1-1/(2r)} (r=3 collapses LowDeg and MedDeg, which is the
general-graph setting).  Four rule families cover the edge set:

  * low: any edge with an endpoint of degree <= LowDeg is kept;
  * cell: degree-restricted centers drawn inside first neighbor blocks
    induce overlapping radius-1 clusters; each cluster is chunked into
    ID-sorted buckets of MedDeg members and exactly one minimum-ID edge
    survives per bucket pair;
  * rep: a vertex samples Theta(log n) prefix indices and adopts the
    high-degree hits as representatives, attaching itself to their centers;
    an edge survives when its far endpoint contributes a representative
    center no earlier neighbor reaches (radius-2 clusters);
  * super: the blocked new-cluster rule of the 3-spanner, rerun with
    window and block SuperDeg and its own center family.

Mid-band vertices are classified deserted or crowded by the low-degree
share of their first block; deserted pairs are the cell rule's care set
and crowded endpoints the rep rule's.  Queries evaluate every family and
OR the answers, falling back to YES (with a failure mark) if the center or
representative sets that the stretch arguments rely on come out empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import randomness as rnd
from .common import (NotAnEdgeError, QueryOutcome, block_bounds,
                     first_block_width, new_center_scan, scan_center_window)

DEFAULT_CONSTANTS = {
    "c_cell": 1.3,    # bias multiplier for the degree-restricted family
    "c_super5": 1.5,  # bias multiplier for the super family
    "c_rep": 3.0,     # representative sample count multiplier
    "budget_mult": 6.0,
}

TINY_N = 16

LOW = "LOW"
DESERTED = "DESERTED"
CROWDED = "CROWDED"
SUPER = "SUPER"


@dataclass(frozen=True)
class Spanner5Params:
    n: int
    id_bits: int
    r: int
    low_deg: int
    med_deg: int
    super_deg: int
    p_cell: float
    p_super: float
    rep_count: int
    d: int
    constants: dict = field(repr=False)

    @property
    def tiny(self) -> bool:
        return self.n < TINY_N

    @classmethod
    def make(cls, n: int, id_bits: int, r: int = 3, constants=None):
        if r < 1:
            raise ValueError("r must be >= 1")
        cons = dict(DEFAULT_CONSTANTS)
        if constants:
            cons.update(constants)
        low_deg = math.ceil(n ** (1.0 / r))
        med_deg = math.ceil(n ** (0.5 - 1.0 / (2 * r)))
        super_deg = math.ceil(n ** (1.0 - 1.0 / (2 * r)))
        med_deg = max(1, med_deg)
        lg = max(1.0, math.log2(max(2, n)))
        return cls(
            n=n,
            id_bits=id_bits,
            r=r,
            low_deg=low_deg,
            med_deg=med_deg,
            super_deg=super_deg,
            p_cell=min(1.0, cons["c_cell"] * lg / med_deg),
            p_super=min(1.0, cons["c_super5"] * lg / super_deg),
            rep_count=math.ceil(cons["c_rep"] * lg),
            d=rnd.independence_order(n),
            constants=cons,
        )

    def probe_budget(self) -> int:
        lg = max(1.0, math.log2(max(2, self.n)))
        shape = self.n ** (1.0 - 1.0 / (2 * self.r)) * lg ** 3
        return math.ceil(self.constants["budget_mult"] * shape) + 8

    def in_band(self, deg: int) -> bool:
        return self.med_deg <= deg <= self.super_deg


class _Session:
    """Per-query memo of probe answers; probes are still charged once."""

    __slots__ = ("deg", "s5", "cluster", "reps", "sprime", "cor")

    def __init__(self):
        self.deg = {}
        self.s5 = {}
        self.cluster = {}
        self.reps = {}
        self.sprime = {}
        self.cor = {}


class Spanner5:
    algo_name = "spanner5"

    def __init__(self, n: int, id_bits: int, seed: int, r: int = 3,
                 constants=None):
        self.params = Spanner5Params.make(n, id_bits, r, constants)
        self.seed_value = seed
        p = self.params
        master = rnd.MasterSeed(seed)
        self._h_cell = master.draw_hash("s5/S", id_bits,
                                        rnd.bias_beta(p.p_cell), p.d)
        self._h_super = master.draw_hash("s5/Sp", id_bits,
                                         rnd.bias_beta(p.p_super), p.d)
        self._sampler = rnd.IndexSampler(master, "s5/reps", id_bits,
                                         max_range=max(1, p.med_deg),
                                         count=p.rep_count, d=p.d)
        self.master = master
        self._cc: dict = {}
        self._sc: dict = {}

    # Coin outcomes depend on ids only; eligibility (degree cap) is probed
    # where the rule needs it.
    def cell_coin(self, vid) -> bool:
        r = self._cc.get(vid)
        if r is None:
            r = self._cc[vid] = self._h_cell.eval(vid) == 0
        return r

    def super_coin(self, vid) -> bool:
        r = self._sc.get(vid)
        if r is None:
            r = self._sc[vid] = self._h_super.eval(vid) == 0
        return r

    def _deg(self, oracle, sess, v) -> int:
        d = sess.deg.get(v)
        if d is None:
            d = sess.deg[v] = oracle.degree(v)
        return d

    # -- classification ---------------------------------------------------

    def classify_vertex(self, oracle, v, sess=None) -> str:
        p = self.params
        sess = sess or _Session()
        dv = self._deg(oracle, sess, v)
        if dv < p.med_deg:
            return LOW
        if dv > p.super_deg:
            return SUPER
        fbw = first_block_width(dv, p.med_deg)
        eligible = 0
        for i in range(1, fbw + 1):
            w = oracle.neighbor(v, i)
            if w is None:
                break
            if self._deg(oracle, sess, w) <= p.super_deg:
                eligible += 1
        return DESERTED if 2 * eligible >= p.med_deg else CROWDED


    # -- cell rule machinery ----------------------------------------------

    def centers_of(self, oracle, sess, v, dv) -> tuple:
        """Degree-eligible sampled centers in v's first block, v included
        when v is itself an eligible center (keeps every cluster member's
        center set pointing back at its own cluster)."""
        got = sess.s5.get(v)
        if got is not None:
            return got
        p = self.params
        fbw = first_block_width(dv, p.med_deg)
        found = []
        neighbor = oracle.neighbor
        for i in range(1, fbw + 1):
            w = neighbor(v, i)
            if w is None:
                break
            if self.cell_coin(w) and self._deg(oracle, sess, w) <= p.super_deg:
                found.append(w)
        if self.cell_coin(v) and dv <= p.super_deg and v not in found:
            found.append(v)
        got = sess.s5[v] = tuple(sorted(set(found)))
        return got

    def cluster_members(self, oracle, s, sess=None) -> tuple:
        """All of center s's cluster, ID-sorted: s plus every neighbor that
        holds s inside its own first block and has degree >= MedDeg."""
        sess = sess or _Session()
        got = sess.cluster.get(s)
        if got is not None:
            return got
        p = self.params
        ds = self._deg(oracle, sess, s)
        if ds > p.super_deg:
            raise ValueError(f"center {s} has degree {ds} > {p.super_deg}")
        members = {s}
        neighbor = oracle.neighbor
        adjacency = oracle.adjacency
        for i in range(1, ds + 1):
            w = neighbor(s, i)
            if w is None:
                break
            dw = self._deg(oracle, sess, w)
            if dw >= p.med_deg:
                idx = adjacency(w, s)
                if idx is not None and idx <= first_block_width(dw, p.med_deg):
                    members.add(w)
        got = sess.cluster[s] = tuple(sorted(members))
        return got

    def bucket_of(self, members: tuple, x) -> tuple:
        """(bucket_index, bucket) of x inside an ID-sorted member tuple.

        Buckets are consecutive MedDeg-wide chunks; only the last may be
        smaller.  Query-independent: a pure function of the cluster."""
        w = self.params.med_deg
        i = members.index(x)
        b = i // w
        return b, members[b * w:(b + 1) * w]

    def _min_edge_is(self, oracle, sess, bucket_a, bucket_b, target) -> bool:
        """Is ``target`` the minimum-ID qualifying edge between buckets?

        Candidates run in lexicographic (ID(a), ID(b)) order, so the first
        adjacent pair with both degrees >= MedDeg decides."""
        p = self.params
        adjacency = oracle.adjacency
        for x in bucket_a:
            if self._deg(oracle, sess, x) < p.med_deg:
                continue
            for y in bucket_b:
                if x == y:
                    continue
                if self._deg(oracle, sess, y) < p.med_deg:
                    continue
                if adjacency(x, y) is not None:
                    return (x, y) == target
        return False

    def query_cell(self, oracle, u, v, sess=None) -> bool:
        sess = sess or _Session()
        du = self._deg(oracle, sess, u)
        dv = self._deg(oracle, sess, v)
        j_vu = oracle.adjacency(v, u)
        j_uv = oracle.adjacency(u, v)
        if j_vu is None or j_uv is None:
            raise NotAnEdgeError((u, v))
        return self._cell_component(oracle, sess, u, v, du, dv, j_vu, j_uv)

    def _cell_component(self, oracle, sess, u, v, du, dv, j_vu, j_uv) -> bool:
        p = self.params
        # (A) direct vertex-to-center edges.
        if (self.cell_coin(u) and du <= p.super_deg
                and j_vu <= first_block_width(dv, p.med_deg)):
            return True
        if (self.cell_coin(v) and dv <= p.super_deg
                and j_uv <= first_block_width(du, p.med_deg)):
            return True
        # (B) one edge per bucket pair.
        if du < p.med_deg or dv < p.med_deg:
            return False
        s_u = self.centers_of(oracle, sess, u, du)
        s_v = self.centers_of(oracle, sess, v, dv)
        seen = set()
        for s in s_u:
            for t in s_v:
                cs = self.cluster_members(oracle, s, sess)
                ct = self.cluster_members(oracle, t, sess)
                bi_u, bucket_u = self.bucket_of(cs, u)
                bi_v, bucket_v = self.bucket_of(ct, v)
                # Canonical orientation per unordered bucket pair, so the
                # kept edge does not depend on which endpoint was queried.
                key_u, key_v = (s, bi_u), (t, bi_v)
                if key_u == key_v:
                    continue
                pair = (key_u, key_v) if key_u < key_v else (key_v, key_u)
                if pair in seen:
                    continue
                seen.add(pair)
                if key_u < key_v:
                    hit = self._min_edge_is(oracle, sess, bucket_u, bucket_v, (u, v))
                else:
                    hit = self._min_edge_is(oracle, sess, bucket_v, bucket_u, (v, u))
                if hit:
                    return True
        return False

    # -- representative rule machinery --------------------------------------

    def reps_of(self, oracle, v, sess=None) -> tuple:
        """Sampled prefix neighbors of degree >= SuperDeg, ID-sorted."""
        sess = sess or _Session()
        got = sess.reps.get(v)
        if got is not None:
            return got
        p = self.params
        dv = self._deg(oracle, sess, v)
        rng = min(p.med_deg, dv)
        if rng < 1:
            got = sess.reps[v] = ()
            return got
        picked = sorted(set(self._sampler.indices(v, rng)))
        reps = set()
        for i in picked:
            x = oracle.neighbor(v, i)
            if x is not None and self._deg(oracle, sess, x) >= p.super_deg:
                reps.add(x)
        got = sess.reps[v] = tuple(sorted(reps))
        return got

    def _sprime_of(self, oracle, sess, x) -> tuple:
        got = sess.sprime.get(x)
        if got is not None:
            return got
        p = self.params
        dx = self._deg(oracle, sess, x)
        window = min(p.super_deg, dx)
        found = scan_center_window(oracle, x, window, self._sc,
                                   self._h_super.eval)
        got = sess.sprime[x] = tuple(s for s, _ in found)
        return got

    def centers_of_reps(self, oracle, v, sess=None) -> tuple:
        sess = sess or _Session()
        got = sess.cor.get(v)
        if got is not None:
            return got
        centers = set()
        for x in self.reps_of(oracle, v, sess):
            centers.update(self._sprime_of(oracle, sess, x))
        got = sess.cor[v] = tuple(sorted(centers))
        return got

    def _rep_scan(self, oracle, sess, scan_u, target_v, j) -> bool:
        """Does target_v bring a representative center none of scan_u's
        earlier in-band neighbors reaches through its own representatives?"""
        p = self.params
        remaining = set(self.centers_of_reps(oracle, target_v, sess))
        if not remaining:
            return False
        neighbor = oracle.neighbor
        adjacency = oracle.adjacency
        for i in range(1, j):
            w = neighbor(scan_u, i)
            if w is None:
                break
            dw = self._deg(oracle, sess, w)
            if not p.in_band(dw):
                continue
            for x in self.reps_of(oracle, w, sess):
                window = min(p.super_deg, self._deg(oracle, sess, x))
                for s in list(remaining):
                    idx = adjacency(x, s)
                    if idx is not None and idx <= window:
                        remaining.discard(s)
                if not remaining:
                    return False
        return True

    def query_rep(self, oracle, u, v, sess=None) -> bool:
        sess = sess or _Session()
        du = self._deg(oracle, sess, u)
        dv = self._deg(oracle, sess, v)
        j_vu = oracle.adjacency(v, u)
        j_uv = oracle.adjacency(u, v)
        if j_vu is None or j_uv is None:
            raise NotAnEdgeError((u, v))
        return self._rep_component(oracle, sess, u, v, du, dv, j_vu, j_uv)

    def _rep_component(self, oracle, sess, u, v, du, dv, j_vu, j_uv) -> bool:
        p = self.params
        # (A) vertex-to-representative edges.
        if p.in_band(dv) and u in self.reps_of(oracle, v, sess):
            return True
        if p.in_band(du) and v in self.reps_of(oracle, u, sess):
            return True
        # (B) new representative-center rule, both orientations.
        if p.in_band(du) and p.in_band(dv):
            if self._rep_scan(oracle, sess, u, v, j_uv):
                return True
            if self._rep_scan(oracle, sess, v, u, j_vu):
                return True
        return False

    # -- super rule (3-spanner block construction at SuperDeg) ---------------

    def _sprime_list(self, oracle, sess, x, dx) -> tuple:
        got = sess.sprime.get(x)
        if got is None:
            window = min(self.params.super_deg, dx)
            found = scan_center_window(oracle, x, window, self._sc,
                                       self._h_super.eval)
            got = sess.sprime[x] = tuple(s for s, _ in found)
        return got

    def _super_component(self, oracle, sess, u, v, du, dv, j_vu, j_uv):
        p = self.params
        sp_u = self._sprime_list(oracle, sess, u, du)
        start, _ = block_bounds(j_vu, dv, p.super_deg)
        keep = new_center_scan(oracle, v, sp_u, start, j_vu - 1, p.super_deg)
        sp_v = None
        if not keep:
            sp_v = self._sprime_list(oracle, sess, v, dv)
            start, _ = block_bounds(j_uv, du, p.super_deg)
            keep = new_center_scan(oracle, u, sp_v, start, j_uv - 1, p.super_deg)
        return keep, sp_u, sp_v

    def query_super(self, oracle, u, v, sess=None) -> bool:
        sess = sess or _Session()
        du = self._deg(oracle, sess, u)
        dv = self._deg(oracle, sess, v)
        j_vu = oracle.adjacency(v, u)
        j_uv = oracle.adjacency(u, v)
        if j_vu is None or j_uv is None:
            raise NotAnEdgeError((u, v))
        keep, _, _ = self._super_component(oracle, sess, u, v, du, dv, j_vu, j_uv)
        return keep

    # -- full query -----------------------------------------------------------

    def query(self, oracle, u, v) -> QueryOutcome:
        p = self.params
        sess = _Session()
        du = self._deg(oracle, sess, u)
        dv = self._deg(oracle, sess, v)
        if p.tiny or min(du, dv) <= p.low_deg:
            return QueryOutcome(True)
        j_vu = oracle.adjacency(v, u)
        j_uv = oracle.adjacency(u, v)
        if j_vu is None or j_uv is None:
            raise NotAnEdgeError((u, v))

        # Super-family center edges.
        if j_vu <= min(p.super_deg, dv) and self.super_coin(u):
            return QueryOutcome(True)
        if j_uv <= min(p.super_deg, du) and self.super_coin(v):
            return QueryOutcome(True)

        if self._cell_component(oracle, sess, u, v, du, dv, j_vu, j_uv):
            return QueryOutcome(True)
        if self._rep_component(oracle, sess, u, v, du, dv, j_vu, j_uv):
            return QueryOutcome(True)
        keep, sp_u, sp_v = self._super_component(oracle, sess, u, v, du, dv,
                                                 j_vu, j_uv)
        if keep:
            return QueryOutcome(True)

        # Omitted: make sure some rule's short-detour argument applies.
        safe = False
        if max(du, dv) > p.super_deg:
            if du > p.super_deg and sp_u:
                safe = True
            elif dv > p.super_deg:
                if sp_v is None:
                    sp_v = self._sprime_list(oracle, sess, v, dv)
                safe = bool(sp_v)
        elif p.in_band(du) and p.in_band(dv):
            cls_u = self.classify_vertex(oracle, u, sess)
            cls_v = self.classify_vertex(oracle, v, sess)
            if cls_u == DESERTED and cls_v == DESERTED:
                safe = (bool(self.centers_of(oracle, sess, u, du))
                        and bool(self.centers_of(oracle, sess, v, dv)))
            else:
                for x, cls in ((u, cls_u), (v, cls_v)):
                    if cls == CROWDED and self.centers_of_reps(oracle, x, sess):
                        safe = True
                        break
        if safe:
            return QueryOutcome(False)
        return QueryOutcome(True, failures=1)

    def check_input(self, g) -> None:
        """The small-size regime for r != 3 assumes min degree >= MedDeg."""
        p = self.params
        if p.r == 3 or g.n < TINY_N:
            return
        lo = min((g.degree(v) for v in g.vertices), default=0)
        if lo < p.med_deg:
            raise ValueError(
                f"r={p.r} requires min degree >= {p.med_deg}, found {lo}")
