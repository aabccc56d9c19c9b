"""Acceptance suite: one test per criterion, one printed verdict line each.

The guarantees under test are asymptotic whp statements, so acceptance is
property-based at desk scale: stretch bounds are exact (the defensive
fallbacks make them deterministic), while size and probe bounds use shape
constants fitted on an anchor cell with 25% headroom and held fixed across
the larger cells (documented fit rule; ratios are expected to fall with n,
and the per-cell tolerances below absorb anchor-quantile noise).

Heavy grids run once in module-scoped fixtures on a small process pool.
Run with ``-s`` to watch per-criterion progress.  Setting
SPANNER_ACCEPT_FAST=1 shrinks the grids for a development smoke pass; the
full stated protocol is the default and is what acceptance means.
"""

import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from itertools import product

import pytest

from spanner_lca import verify
from spanner_lca.graph import build_from_edge_list, generate
from spanner_lca.k2_dense import K2Spanner, _DenseSession
from spanner_lca.k2_sparse import (bfs_explore, compute_global_sparse_flags,
                                   global_sparse_spanner)
from spanner_lca.oracle import ProbeOracle, sealed
from spanner_lca.spanner3 import Spanner3
from spanner_lca.spanner5 import Spanner5

FAST = os.environ.get("SPANNER_ACCEPT_FAST") == "1"
JOBS = 2
SEEDS = 4 if FAST else 20
N_GRID = [200, 500] if FAST else [200, 500, 1000, 2000]

# Documented fit rule: constant = headroom * max anchor-cell ratio, held
# fixed across the larger cells.  Edge counts concentrate tightly, so size
# constants carry 25% headroom; per-run probe *maxima* are extreme-value
# statistics (the anchor may simply never realize its worst query), so
# probe constants carry 2x.  The substantive check is that the ratios do
# not grow with n.
FIT_MARGIN_SIZE = 1.25
FIT_MARGIN_PROBE = 2.0

LOG2 = lambda n: math.log2(n)


def _report(num, ok, text):
    print(f"\n[criterion {num:02d}] {'PASS' if ok else 'FAIL'}: {text}")
    assert ok, f"criterion {num} failed: {text}"


def _p_for(n, deg):
    return min(1.0, deg / (n - 1))


def _fit_size(ratios):
    return FIT_MARGIN_SIZE * max(ratios)


def _fit_probe(ratios):
    return FIT_MARGIN_PROBE * max(ratios)


# ---------------------------------------------------------------------------
# Worker tasks (top-level for pickling).  Each materializes one (graph,
# seed) cell and returns a scalar summary.
# ---------------------------------------------------------------------------


def _s3_task(task):
    n, gen_seed, lca_seed, p = task
    g = generate("gnp", gen_seed, n=n, p=p)
    lca = Spanner3(n=g.n, id_bits=g.max_id_bits(), seed=lca_seed)
    sp = verify.materialize(lca, g)
    violations = verify.stretch_check(g, sp, 3)
    return {"n": n, "seed": lca_seed, "p": p, "m": g.m,
            "kept": sp.edge_count, "max_probes": sp.max_probes,
            "failures": sp.failure_events, "violations": len(violations)}


def _s5_task(task):
    n, gen_seed, lca_seed, p = task
    g = generate("gnp", gen_seed, n=n, p=p)
    lca = Spanner5(n=g.n, id_bits=g.max_id_bits(), seed=lca_seed)
    sp = verify.materialize(lca, g)
    violations = verify.stretch_check(g, sp, 5)
    return {"n": n, "seed": lca_seed, "p": p, "m": g.m,
            "kept": sp.edge_count, "max_probes": sp.max_probes,
            "failures": sp.failure_events, "violations": len(violations)}


def _s5r4_task(task):
    n, d, gen_seed, lca_seed = task
    g = generate("regular", gen_seed, n=n, d=d)
    lca = Spanner5(n=g.n, id_bits=g.max_id_bits(), seed=lca_seed, r=4)
    lca.check_input(g)
    sp = verify.materialize(lca, g)
    violations = verify.stretch_check(g, sp, 5)
    return {"n": n, "seed": lca_seed, "d": d, "m": g.m,
            "kept": sp.edge_count, "max_probes": sp.max_probes,
            "failures": sp.failure_events, "violations": len(violations)}


def _k2_task(task):
    n, d, k, gen_seed, lca_seed, budget = task
    g = generate("regular", gen_seed, n=n, d=d)
    lca = K2Spanner(n=g.n, id_bits=g.max_id_bits(), seed=lca_seed, k=k)
    sp = verify.materialize(lca, g, mode="bench", budget=budget)
    dist = verify.edge_stretches(g, sp.kept, cap=8 * k * k)
    finite = [x for x in dist.values() if x is not None]
    disconnected = any(x is None for x in dist.values())
    return {"n": n, "d": d, "k": k, "seed": lca_seed, "m": g.m,
            "kept": sp.edge_count, "max_probes": sp.max_probes,
            "failures": sp.failure_events,
            "budget_violations": sp.budget_violations,
            "max_stretch": None if disconnected else max(finite, default=0)}


def _pool_map(fn, tasks):
    if JOBS > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=JOBS) as pool:
            return list(pool.map(fn, tasks, chunksize=1))
    return [fn(t) for t in tasks]


# ---------------------------------------------------------------------------
# Grids.  Densities per n cycle a ladder from sparse to Delta = Theta(n);
# 20 seeds per n, rung weights as listed.
# ---------------------------------------------------------------------------


def _ladder3(n):
    degs = [6, math.ceil(1.5 * math.sqrt(n)), math.ceil(0.12 * n),
            math.ceil(0.30 * n)]
    weights = [5, 5, 5, 5]
    return degs, weights


_DENSE5 = {200: 100, 500: 240, 1000: 400, 2000: 600}


def _ladder5(n):
    degs = [6, 3 * math.ceil(n ** (1 / 3)), math.ceil(0.05 * n), _DENSE5[n]]
    weights = [6, 6, 6, 2]
    return degs, weights


def _rungs(degs, weights, count):
    seq = [d for d, w in zip(degs, weights) for _ in range(w)]
    return seq[:count]


@pytest.fixture(scope="module")
def s3_runs():
    tasks = []
    for n in N_GRID:
        degs, weights = _ladder3(n)
        for i, deg in enumerate(_rungs(degs, weights, SEEDS)):
            tasks.append((n, 500 + i, 1000 + i, _p_for(n, deg)))
    print(f"\n[setup] spanner3 grid: {len(tasks)} materializations ...")
    return _pool_map(_s3_task, tasks)


@pytest.fixture(scope="module")
def s5_runs():
    tasks = []
    for n in N_GRID:
        degs, weights = _ladder5(n)
        for i, deg in enumerate(_rungs(degs, weights, SEEDS)):
            tasks.append((n, 700 + i, 3000 + i, _p_for(n, deg)))
    print(f"\n[setup] spanner5 grid: {len(tasks)} materializations ...")
    return _pool_map(_s5_task, tasks)


R4_CELLS = [(300, 28), (600, 40)]  # n, regular degree >= 3 * MedDeg(n, r=4)


@pytest.fixture(scope="module")
def s5r4_runs():
    tasks = []
    for n, d in (R4_CELLS[:1] if FAST else R4_CELLS):
        for i in range(SEEDS):
            tasks.append((n, d, 800 + i, 5000 + i))
    print(f"\n[setup] spanner5 r=4 grid: {len(tasks)} materializations ...")
    return _pool_map(_s5r4_task, tasks)


K2_N = [500] if FAST else [500, 2000]
K2_K = [2, 3, 4]
K2_DEGS = [4, 6, 8]


@pytest.fixture(scope="module")
def k2_runs():
    # phase A: the anchor n (500) unbudgeted; fit per-k probe constants
    anchor_tasks = []
    for k in K2_K:
        for i in range(SEEDS):
            d = K2_DEGS[i % len(K2_DEGS)]
            anchor_tasks.append((500, d, k, 900 + i, 7000 + 100 * k + i, None))
    print(f"\n[setup] k2 anchor grid: {len(anchor_tasks)} materializations ...")
    anchor = _pool_map(_k2_task, anchor_tasks)
    budgets = {}
    for k in K2_K:
        ratios = [r["max_probes"] / (r["d"] ** 4 * 500 ** (2 / 3))
                  for r in anchor if r["k"] == k]
        budgets[k] = _fit_probe(ratios)
    # phase B: larger n in budget mode, enforcing the fitted shapes
    rest_tasks = []
    for n in K2_N[1:]:
        for k in K2_K:
            for i in range(SEEDS):
                d = K2_DEGS[i % len(K2_DEGS)]
                budget = math.ceil(budgets[k] * d ** 4 * n ** (2 / 3))
                rest_tasks.append((n, d, k, 900 + i, 7000 + 100 * k + i,
                                   budget))
    if rest_tasks:
        print(f"[setup] k2 main grid: {len(rest_tasks)} materializations ...")
    rest = _pool_map(_k2_task, rest_tasks)
    return anchor + rest, budgets


# ---------------------------------------------------------------------------
# Criteria 1-2: 3-spanner stretch, size, probes
# ---------------------------------------------------------------------------


def test_c01_spanner3_stretch(s3_runs):
    bad = [(r["n"], r["seed"], r["p"]) for r in s3_runs if r["violations"]]
    _report(1, not bad,
            f"3-spanner stretch<=3 on {len(s3_runs)} gnp cells "
            f"(n in {N_GRID}, {SEEDS} seeds each, sparse..dense); "
            f"violating cells: {bad}")


def test_c02_spanner3_size_and_probes(s3_runs):
    size_shape = lambda n: n ** 1.5 * LOG2(n)
    probe_shape = lambda n: n ** 0.75 * LOG2(n) ** 2
    anchor = [r for r in s3_runs if r["n"] == 200]
    c_size = _fit_size([r["kept"] / size_shape(200) for r in anchor])
    c_probe = _fit_probe([r["max_probes"] / probe_shape(200) for r in anchor])
    ok = True
    detail = [f"C={c_size:.3f} C'={c_probe:.3f} (fit at n=200)"]
    for n in [x for x in N_GRID if x != 200]:
        runs = [r for r in s3_runs if r["n"] == n]
        good = sum(r["kept"] <= c_size * size_shape(n)
                   and r["max_probes"] <= c_probe * probe_shape(n)
                   for r in runs)
        fail_seeds = sum(r["failures"] > 0 for r in runs)
        detail.append(f"n={n}: {good}/{len(runs)} in shape, "
                      f"{fail_seeds} failure seeds")
        ok = ok and good >= len(runs) - 1 and fail_seeds <= 1
    _report(2, ok, "3-spanner size n^1.5*log(n), probes n^0.75*log^2(n); "
            + "; ".join(detail))


# ---------------------------------------------------------------------------
# Criterion 3: 5-spanner
# ---------------------------------------------------------------------------


def test_c03_spanner5(s5_runs, s5r4_runs):
    bad = [(r["n"], r["seed"], r["p"]) for r in s5_runs if r["violations"]]
    size_shape = lambda n: n ** (4 / 3) * LOG2(n) ** 2
    probe_shape = lambda n: n ** (5 / 6) * LOG2(n) ** 3
    anchor = [r for r in s5_runs if r["n"] == 200]
    c_size = _fit_size([r["kept"] / size_shape(200) for r in anchor])
    c_probe = _fit_probe([r["max_probes"] / probe_shape(200) for r in anchor])
    ok = not bad
    detail = [f"stretch violations: {bad}",
              f"C={c_size:.3f} C'={c_probe:.3f} (fit at n=200)"]
    for n in [x for x in N_GRID if x != 200]:
        runs = [r for r in s5_runs if r["n"] == n]
        good = sum(r["kept"] <= c_size * size_shape(n)
                   and r["max_probes"] <= c_probe * probe_shape(n)
                   for r in runs)
        fail_seeds = sum(r["failures"] > 0 for r in runs)
        detail.append(f"n={n}: {good}/{len(runs)} in shape, "
                      f"{fail_seeds} failure seeds")
        ok = ok and good >= len(runs) - 1 and fail_seeds <= 1

    # small-size regime: r=4 on min-degree instances
    r4_bad = [(r["n"], r["seed"]) for r in s5r4_runs if r["violations"]]
    ok = ok and not r4_bad
    r4_shape = lambda n: n ** 1.25 * LOG2(n) ** 2
    r4_anchor_n = s5r4_runs[0]["n"]
    c_r4 = _fit_size([r["kept"] / r4_shape(r4_anchor_n)
                 for r in s5r4_runs if r["n"] == r4_anchor_n])
    for n in {r["n"] for r in s5r4_runs} - {r4_anchor_n}:
        runs = [r for r in s5r4_runs if r["n"] == n]
        good = sum(r["kept"] <= c_r4 * r4_shape(n) for r in runs)
        detail.append(f"r4 n={n}: {good}/{len(runs)} in shape")
        ok = ok and good >= len(runs) - 1
    detail.append(f"r4 stretch violations: {r4_bad}")
    _report(3, ok, "5-spanner stretch<=5, size n^{4/3}log^2, probes "
            "n^{5/6}log^3, r=4 min-degree size n^{1.25}log^2; "
            + "; ".join(detail))


# ---------------------------------------------------------------------------
# Criterion 4: O(k^2)-spanner on bounded-degree graphs
# ---------------------------------------------------------------------------


def test_c04_k2_spanner(k2_runs):
    runs, budgets = k2_runs
    anchor = [r for r in runs if r["n"] == 500 and r["k"] == 2
              and r["failures"] == 0]
    assert anchor, "anchor cell must have non-failure seeds"
    c_s = _fit_probe([r["max_stretch"] / 4 for r in anchor])
    size_shape = lambda n, k: n ** (1 + 1 / k) * LOG2(n) ** 4
    c_sz = {k: _fit_size([r["kept"] / size_shape(500, k)
                     for r in runs if r["n"] == 500 and r["k"] == k])
            for k in K2_K}
    ok = True
    detail = [f"C_s={c_s:.2f} (fit at n=500,k=2)"]
    for n, k in product(sorted({r["n"] for r in runs}), K2_K):
        cell = [r for r in runs if r["n"] == n and r["k"] == k]
        if not cell:
            continue
        fail_seeds = [r for r in cell if r["failures"] > 0]
        stretch_bad = [r for r in cell if r["failures"] == 0
                       and (r["max_stretch"] is None
                            or r["max_stretch"] > c_s * k * k)]
        size_bad = [r for r in cell if r["kept"] > c_sz[k] * size_shape(n, k)]
        probe_bad = [r for r in cell if r["budget_violations"] > 0]
        cell_ok = (len(fail_seeds) <= 1 and not stretch_bad
                   and len(size_bad) <= 1 and len(probe_bad) <= 1)
        detail.append(
            f"(n={n},k={k}): stretch_bad={len(stretch_bad)} "
            f"fail_seeds={len(fail_seeds)} size_bad={len(size_bad)} "
            f"probe_bad={len(probe_bad)}")
        ok = ok and cell_ok
    _report(4, ok, "k2-spanner stretch<=C_s*k^2, size n^{1+1/k}log^4 "
            "(per-k fit), probes Delta^4*n^{2/3} budget mode; "
            + "; ".join(detail))


# ---------------------------------------------------------------------------
# Criterion 5: locality soundness of the sparse simulation
# ---------------------------------------------------------------------------

# Coupling for a populated sparse regime: exploration cap above n (exact
# classification, no capped-search orphans) and a small center bias.
SPARSE_REGIME = {"c_L": 40.0, "c_center": 0.25}


def _locality_task(seed):
    g = generate("gnp", 31 + seed, n=200, p=0.03)
    lca = K2Spanner(n=g.n, id_bits=g.max_id_bits(), seed=4000 + seed, k=3,
                    constants=SPARSE_REGIME)
    flags = compute_global_sparse_flags(g, lca.params, lca.is_center)
    glob = global_sparse_spanner(g, flags, lca.params, lca.phase_coin)
    sparse_edges = [(u, v) for u, v in g.edges() if flags[u] or flags[v]]
    mismatches = 0
    for u, v in sparse_edges:
        keep = lca.query(sealed(ProbeOracle(g)), u, v).keep
        if keep != ((min(u, v), max(u, v)) in glob):
            mismatches += 1
    return len(sparse_edges), mismatches


def test_c05_locality_soundness():
    seeds = range(3 if FAST else 10)
    results = _pool_map(_locality_task, list(seeds))
    total = sum(t for t, _ in results)
    mism = sum(m for _, m in results)
    _report(5, total > 0 and mism == 0,
            f"local simulation == global run on gnp(200,0.03), k=3, "
            f"{len(results)} seeds, {total} sparse edges, {mism} mismatches")


# ---------------------------------------------------------------------------
# Criterion 6: cluster partition
# ---------------------------------------------------------------------------


def _bush_graph(children, leaves):
    edges = []
    nxt = children + 1
    for c in range(1, children + 1):
        edges.append((0, c))
    for c in range(1, children + 1):
        for _ in range(leaves):
            edges.append((c, nxt))
            nxt += 1
    return build_from_edge_list(nxt, edges)


def _partition_graphs():
    lattice = []
    rows, cols = 15, 20
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                lattice.append((r * cols + c, r * cols + c + 1))
            if r + 1 < rows:
                lattice.append((r * cols + c, (r + 1) * cols + c))
    out = [
        (generate("regular", 11, n=250, d=6), 3, None),
        (generate("regular", 12, n=400, d=4), 3, None),
        (generate("regular", 13, n=320, d=8), 2, None),
        (generate("gnp", 14, n=300, p=0.02), 3, None),
        (generate("gnp", 15, n=250, p=0.04), 3, None),
        (build_from_edge_list(300, [(i, i + 1) for i in range(299)]), 4, None),
        (build_from_edge_list(240, [(i, (i + 1) % 240) for i in range(240)]),
         4, None),
        (build_from_edge_list(rows * cols, lattice), 3, None),
        (_bush_graph(6, 6), 2, {"c_L": 1.7, "c_center": 1 / 64}),
        (_bush_graph(4, 8), 2, {"c_L": 1.6, "c_center": 1 / 64}),
    ]
    return out


def _orphan_free_lca(g, k, constants, base_seed):
    """Deterministic seed scan: the partition property presupposes the whp
    hitting event, so pick the first seed realizing it (almost always the
    first try; bush graphs additionally want their hub as sole center)."""
    for seed in range(base_seed, base_seed + 3000):
        lca = K2Spanner(n=g.n, id_bits=g.max_id_bits(), seed=seed, k=k,
                        constants=constants)
        if constants is not None:  # bush coupling: exactly one center, at 0
            if not lca.is_center(0) or any(
                    lca.is_center(v) for v in g.vertices if v != 0):
                continue
        sess = _DenseSession(ProbeOracle(g))
        ok = True
        for v in g.vertices:
            res = bfs_explore(sess.fetch, v, lca.params, lca.is_center)
            if len(res.discovered) >= lca.params.L and res.found_center is None:
                ok = False
                break
        if ok:
            return lca
    raise AssertionError("no orphan-free seed in range")


def test_c06_cluster_partition():
    checked = 0
    clusters_total = 0
    for gi, (g, k, constants) in enumerate(_partition_graphs()):
        lca = _orphan_free_lca(g, k, constants, base_seed=100 * gi)
        sess = _DenseSession(ProbeOracle(g))
        dense = [v for v in g.vertices if not lca.sparse_flag(sess, v)]
        clusters = {}
        for v in dense:
            clu = lca.cluster_of(None, v, sess)
            assert v in clu.members
            assert len(clu.members) <= 2 * lca.params.L
            clusters[clu.members] = True
        covered = set()
        for members in clusters:
            assert not (covered & set(members)), "clusters overlap"
            covered.update(members)
        assert covered == set(dense), "clusters miss dense vertices"
        bound = 2.0 * g.n * LOG2(g.n) / lca.params.L
        assert len(clusters) <= bound
        checked += 1
        clusters_total += len(clusters)
    _report(6, checked == 10,
            f"cluster partition exact on {checked} graphs "
            f"({clusters_total} clusters; sizes<=2L, count<=2n*log(n)/L)")


# ---------------------------------------------------------------------------
# Criterion 7: bounded independence
# ---------------------------------------------------------------------------


def test_c07_bounded_independence():
    from scipy import stats
    from spanner_lca import randomness as rnd
    exact_ok = True
    for x1 in range(4):
        for x2 in range(4):
            if x1 == x2:
                continue
            joint = Counter()
            for c0 in range(4):
                for c1 in range(4):
                    h = rnd.HashFunction(gamma=2, beta=2, d=2,
                                         coeffs=(c0, c1))
                    joint[(h.eval(x1), h.eval(x2))] += 1
            exact_ok = exact_ok and len(joint) == 16 \
                and set(joint.values()) == {1}
    s = rnd.MasterSeed(987654)
    h = s.draw_hash("accept-chi", 21, 8, rnd.independence_order(10 ** 5))
    counts = Counter(h.eval(x) for x in range(10 ** 5))
    _, pvalue = stats.chisquare([counts.get(b, 0) for b in range(256)])
    _report(7, exact_ok and pvalue > 0.001,
            f"exact joint uniformity over all 16 seeds (gamma=beta=d=2); "
            f"chi-square on 1e5 production evaluations p={pvalue:.4f} > 0.001")


# ---------------------------------------------------------------------------
# Criterion 8: seed budget
# ---------------------------------------------------------------------------

SEED_BUDGET_C = 112  # documented: worst measured ratio 101.8 plus headroom


def test_c08_seed_budget():
    worst = 0.0
    for n in (64, 1024, 16384, 10 ** 6):
        bits = (4 * n - 1).bit_length()
        denom = math.ceil(LOG2(n)) ** 2
        for k in (1, 5, 12, 20):
            total = 0
            for lca in (Spanner3(n=n, id_bits=bits, seed=1),
                        Spanner5(n=n, id_bits=bits, seed=1),
                        K2Spanner(n=n, id_bits=bits, seed=1, k=k)):
                total += lca.master.bits_consumed
            worst = max(worst, total / denom)
    _report(8, worst <= SEED_BUDGET_C,
            f"total drawn bits <= {SEED_BUDGET_C}*ceil(log2 n)^2 over "
            f"(n<=1e6, k<=20); worst ratio {worst:.1f}")


# ---------------------------------------------------------------------------
# Criterion 9: consistency
# ---------------------------------------------------------------------------


def _consistency_task(algo):
    g = generate("gnp", 77, n=300, p=0.1)
    bits = g.max_id_bits()
    if algo == "spanner3":
        factory = lambda s: Spanner3(n=g.n, id_bits=bits, seed=s)
    elif algo == "spanner5":
        factory = lambda s: Spanner5(n=g.n, id_bits=bits, seed=s)
    else:
        factory = lambda s: K2Spanner(n=g.n, id_bits=bits, seed=s, k=2)
    return algo, verify.consistency_check(factory, g, seed=999, trials=2,
                                          orders=5)


def test_c09_consistency():
    results = [_consistency_task(a) for a in ("spanner3", "spanner5", "k2")]
    bad = [a for a, ok in results if not ok]
    _report(9, not bad,
            "5 shuffled orders x 2 instances agree edge-for-edge on "
            f"gnp(300,0.1) for spanner3, spanner5, k2; disagreements: {bad}")


# ---------------------------------------------------------------------------
# Criterion 10: probe-model purity
# ---------------------------------------------------------------------------


def test_c10_probe_model_purity():
    from spanner_lca.common import QueryOutcome
    from spanner_lca.oracle import SealedOracle

    g = generate("gnp", 5, n=60, p=0.1)
    seen_types = []

    class Probing:
        algo_name = "probe-recorder"

        def query(self, oracle, u, v):
            seen_types.append(type(oracle))
            oracle.degree(u)
            return QueryOutcome(True)

    verify.materialize(Probing(), g)
    all_sealed = seen_types and all(t is SealedOracle for t in seen_types)

    class Cheater:
        algo_name = "cheater"

        def query(self, oracle, u, v):
            oracle._nbrs  # any non-probe access must be unreachable
            return QueryOutcome(True)

    cheater_blocked = False
    try:
        verify.materialize(Cheater(), g)
    except AttributeError:
        cheater_blocked = True

    s = sealed(ProbeOracle(g))
    surface_ok = all(hasattr(s, a) for a in ("neighbor", "degree",
                                             "adjacency", "tally"))
    leaks = [a for a in ("graph", "_nbrs", "_index", "neighbors")
             if hasattr(s, a)]
    _report(10, all_sealed and cheater_blocked and surface_ok and not leaks,
            "every materialized query ran behind the sealed probe facade; "
            f"non-probe access raises (cheater_blocked={cheater_blocked}, "
            f"leaks={leaks})")
