import json

import pytest

from spanner_lca import verify
from spanner_lca.common import QueryOutcome
from spanner_lca.graph import build_from_edge_list, generate
from spanner_lca.k2_dense import K2Spanner
from spanner_lca.oracle import BudgetExceededError
from spanner_lca.spanner3 import Spanner3
from spanner_lca.spanner5 import Spanner5

from conftest import cycle_graph, path_graph


def s3(g, seed=1):
    return Spanner3(n=g.n, id_bits=g.max_id_bits(), seed=seed)


def test_materialize_low_only_graph_keeps_everything():
    g = generate("gnp", 3, n=80, p=0.04)  # degrees well under sqrt(n)
    assert max(g.degree(v) for v in g.vertices) <= 8
    sp = verify.materialize(s3(g), g)
    assert sp.kept == frozenset(g.edges())


def test_materialize_tree_kept_by_every_algorithm():
    edges = [(i, (i - 1) // 2) for i in range(1, 31)]
    g = build_from_edge_list(31, edges)
    for lca in (s3(g),
                Spanner5(n=g.n, id_bits=g.max_id_bits(), seed=2),
                K2Spanner(n=g.n, id_bits=g.max_id_bits(), seed=3, k=3)):
        sp = verify.materialize(lca, g)
        assert sp.kept == frozenset(g.edges()), lca.algo_name


def test_materialize_deterministic():
    g = generate("gnp", 5, n=150, p=0.2)
    a = verify.materialize(s3(g, seed=9), g)
    b = verify.materialize(s3(g, seed=9), g)
    assert a.kept == b.kept
    assert a.failure_events == b.failure_events


def test_stretch_check_identity_spanner():
    g = generate("gnp", 6, n=60, p=0.15)
    for t in (1, 2, 5):
        assert verify.stretch_check(g, frozenset(g.edges()), t) == []


def test_stretch_check_cycle_spanning_tree():
    g = cycle_graph(10)
    kept = frozenset(list(g.edges())[:0] or []) | {
        e for e in g.edges() if e != (0, 9)
    }
    assert len(kept) == 9
    violations = verify.stretch_check(g, kept, 3)
    assert violations == [(0, 9, 9)]
    assert verify.stretch_check(g, kept, 9) == []


def test_stretch_check_disconnection_reports_none():
    g = path_graph(4)
    kept = frozenset({(0, 1), (2, 3)})
    violations = verify.stretch_check(g, kept, 5)
    assert violations == [(1, 2, None)]
    assert not verify.preserves_components(g, kept)


def test_edge_stretches_match_bfs_oracle():
    for seed in (7, 8):
        g = generate("gnp", seed, n=40, p=0.15)
        sp = verify.materialize(s3(g, seed=seed), g)
        dist = verify.edge_stretches(g, sp.kept, cap=6)
        hadj = {v: [] for v in g.vertices}
        for u, v in sp.kept:
            hadj[u].append(v)
            hadj[v].append(u)
        for (u, v), d in dist.items():
            ref = verify.bfs_distance(hadj, u, v)
            assert d == (ref if ref is not None and ref <= 6 else None)


def test_bitset_and_naive_checkers_agree_on_small_graphs():
    for seed in (1, 2, 3, 4):
        g = generate("gnp", seed, n=50, p=0.12)
        sp = verify.materialize(s3(g, seed=seed), g)
        fast = set(verify.stretch_check(g, sp, 3))
        slow = set(verify.naive_stretch_check(g, sp.kept, 3))
        assert fast == slow


def test_consistency_check_passes_for_pure_lca():
    g = generate("gnp", 9, n=100, p=0.15)
    assert verify.consistency_check(lambda s: s3(g, seed=s), g, seed=4,
                                    trials=2, orders=2)


def test_consistency_check_detects_statefulness():
    g = generate("gnp", 9, n=60, p=0.2)

    class Stateful:
        algo_name = "bad"

        def __init__(self):
            self.count = 0

        def query(self, oracle, u, v):
            self.count += 1
            return QueryOutcome(self.count % 2 == 0)

    assert not verify.consistency_check(lambda s: Stateful(), g, seed=1,
                                        trials=2, orders=3)


def test_fit_constant():
    assert verify.fit_constant([(10.0, 10.0), (20.0, 20.0)]) == 1.0
    assert verify.fit_constant([(10.0, 20.0)]) == 2.0
    with pytest.raises(ValueError):
        verify.fit_constant([])


def test_budget_enforced_in_test_mode():
    g = generate("gnp", 11, n=150, p=0.3)
    with pytest.raises(BudgetExceededError):
        verify.materialize(s3(g), g, mode="test", budget=10)


def test_budget_counted_in_bench_mode():
    g = generate("gnp", 11, n=150, p=0.3)
    sp = verify.materialize(s3(g), g, mode="bench", budget=10)
    assert sp.budget_violations > 0
    assert sp.max_probes > 10


def test_report_schema_and_field_order():
    g = generate("gnp", 13, n=100, p=0.2)
    lca = s3(g, seed=6)
    sp = verify.materialize(lca, g)
    rep = verify.make_report("spanner3", g, sp, 3, seed=6, param=0,
                             constants=lca.params.constants)
    assert list(rep) == [
        "algo", "n", "m", "k_or_r", "seed", "edge_count", "max_stretch",
        "stretch_violations", "max_probes", "mean_probes", "failure_events",
        "budget_violations", "constants",
    ]
    assert rep["max_stretch"] <= 3
    assert rep["stretch_violations"] == []
    json.dumps(rep)  # serializable


def test_report_flags_violations():
    g = cycle_graph(12)
    class DropOne:
        algo_name = "drop"
        def query(self, oracle, u, v):
            return QueryOutcome((u, v) != (0, 11) and (v, u) != (0, 11))
    sp = verify.materialize(DropOne(), g)
    rep = verify.make_report("drop", g, sp, 3, seed=0, param=0, constants={})
    assert rep["max_stretch"] == "inf"
    assert rep["stretch_violations"] == [{"u": 0, "v": 11, "dist": None}]
