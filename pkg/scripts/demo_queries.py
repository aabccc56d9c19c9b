#!/usr/bin/env python3
"""Minimal walkthrough: one graph, a handful of edge queries, one report.

Shows the probe-level cost of single queries next to the verifier's view
of the whole materialized spanner.
"""

from spanner_lca import ProbeOracle, Spanner3, generate, sealed, verify


def main():
    g = generate("gnp", gen_seed=7, n=400, p=0.2)
    lca = Spanner3(n=g.n, id_bits=g.max_id_bits(), seed=42)

    print(f"graph: n={g.n} m={g.m}")
    for u, v in list(g.edges())[:6]:
        oracle = ProbeOracle(g)
        out = lca.query(sealed(oracle), u, v)
        t = oracle.tally
        print(f"  edge ({u:4d},{v:4d}) -> {'YES' if out.keep else 'NO ':3s}"
              f"  probes={t.total:4d} (nbr={t.neighbor_count}"
              f" deg={t.degree_count} adj={t.adjacency_count})")

    spanner = verify.materialize(lca, g)
    report = verify.make_report("spanner3", g, spanner, stretch_bound=3,
                                seed=42, param=0,
                                constants=lca.params.constants)
    print(f"\nmaterialized: kept {report['edge_count']}/{g.m} edges, "
          f"max stretch {report['max_stretch']}, "
          f"max probes/query {report['max_probes']}, "
          f"failure events {report['failure_events']}")


if __name__ == "__main__":
    main()
