"""Experiment driver: generate graphs, run single queries, verify, sweep.

Every report embeds the full run configuration, so re-running a command
line reproduces the report byte-for-byte (timestamps live in their own
field and are excluded from that guarantee).
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import verify
from .common import NotAnEdgeError, QueryOutcome
from .graph import Graph, generate, read_graph, write_graph
from .k2_dense import K2Spanner
from .spanner3 import Spanner3
from .spanner5 import Spanner5


def parse_gen_spec(spec: str, n_override=None) -> tuple:
    """"gnp:n=500,p=0.3" -> ("gnp", {"n": 500, "p": 0.3})."""
    model, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            key = key.strip()
            val = val.strip()
            params[key] = float(val) if "." in val or "e" in val else int(val)
    if n_override is not None:
        params["n"] = n_override
    return model, params


def load_graph(args, n_override=None) -> Graph:
    if getattr(args, "graph", None):
        return read_graph(args.graph)
    model, params = parse_gen_spec(args.gen, n_override)
    return generate(model, args.gen_seed, **params)


def parse_constants(items) -> dict:
    out = {}
    for item in items or []:
        for part in item.split(","):
            if not part.strip():
                continue
            key, _, val = part.partition("=")
            out[key.strip()] = float(val)
    return out


def build_lca(algo: str, g: Graph, seed: int, r: int, k: int, constants: dict):
    bits = g.max_id_bits()
    if algo == "spanner3":
        return Spanner3(n=g.n, id_bits=bits, seed=seed, constants=constants)
    if algo == "spanner5":
        lca = Spanner5(n=g.n, id_bits=bits, seed=seed, r=r,
                       constants=constants)
        lca.check_input(g)
        return lca
    if algo == "k2":
        return K2Spanner(n=g.n, id_bits=bits, seed=seed, k=k,
                         constants=constants)
    raise ValueError(f"unknown algo {algo!r}")


def default_stretch_bound(algo: str, r: int, k: int) -> int:
    if algo == "spanner3":
        return 3
    if algo == "spanner5":
        return 5
    return 4 * k * k


class FaultyLCA:
    """Self-test aid: deterministically drops a fraction of YES answers so
    the verifier's sensitivity to broken query algorithms is itself
    testable."""

    def __init__(self, inner, drop_rate: float):
        self.inner = inner
        self.drop_rate = drop_rate
        self.algo_name = inner.algo_name + "+fault"
        self.params = inner.params

    def query(self, oracle, u, v) -> QueryOutcome:
        out = self.inner.query(oracle, u, v)
        if out.keep:
            lo, hi = (u, v) if u < v else (v, u)
            roll = random.Random(
                lo * 2654435761 + hi * 40503 + self.inner.seed_value).random()
            if roll < self.drop_rate:
                return QueryOutcome(False, out.failures)
        return out


def run_config(algo, g, seed, r, k, constants, mode, budget, fault_drop=0.0):
    lca = build_lca(algo, g, seed, r, k, constants)
    if fault_drop:
        lca = FaultyLCA(lca, fault_drop)
    spanner = verify.materialize(lca, g, mode=mode, budget=budget)
    bound = default_stretch_bound(algo, r, k)
    param = r if algo == "spanner5" else (k if algo == "k2" else 0)
    cons = dict(lca.params.constants)
    report = verify.make_report(algo, g, spanner, bound, seed, param, cons)
    return report, spanner


def _add_common(sub, gen_required=True):
    src = sub.add_mutually_exclusive_group(required=gen_required)
    src.add_argument("--graph", help="edge-list file")
    src.add_argument("--gen", help="generator spec, e.g. gnp:n=500,p=0.3")
    sub.add_argument("--gen-seed", type=int, default=0,
                     help="seed for the graph generator")
    sub.add_argument("--algo", choices=["spanner3", "spanner5", "k2"],
                     default="spanner3")
    sub.add_argument("--r", type=int, default=3)
    sub.add_argument("--k", type=int, default=2)
    sub.add_argument("--seed", type=int, default=1,
                     help="master seed for the query algorithm")
    sub.add_argument("--mode", choices=["test", "bench"], default="test")
    sub.add_argument("--budget", type=int, default=None)
    sub.add_argument("--constants", action="append", default=[],
                     metavar="KEY=VAL[,KEY=VAL...]")
    sub.add_argument("--out", default=None)


def cmd_gen(args) -> int:
    g = load_graph(args)
    if args.out:
        write_graph(g, args.out)
    else:
        write_graph(g, "/dev/stdout")
    return 0


def cmd_query(args) -> int:
    g = load_graph(args)
    if args.u not in g.index_of or not g.has_edge(args.u, args.v):
        print(f"error not-an-edge u={args.u} v={args.v}")
        return 2
    lca = build_lca(args.algo, g, args.seed, args.r, args.k,
                    parse_constants(args.constants))
    from .oracle import ProbeOracle, sealed
    oracle = ProbeOracle(g, budget=args.budget if args.mode == "test" else None)
    try:
        out = lca.query(sealed(oracle), args.u, args.v)
    except NotAnEdgeError:
        print(f"error not-an-edge u={args.u} v={args.v}")
        return 2
    t = oracle.tally
    print(f"{'YES' if out.keep else 'NO'} u={args.u} v={args.v} "
          f"probes={t.total} neighbor={t.neighbor_count} "
          f"degree={t.degree_count} adjacency={t.adjacency_count} "
          f"failures={out.failures}")
    return 0


def cmd_verify(args) -> int:
    g = load_graph(args)
    constants = parse_constants(args.constants)
    report, _ = run_config(args.algo, g, args.seed, args.r, args.k, constants,
                           args.mode, args.budget, args.fault_drop)
    lca_factory = lambda s: build_lca(args.algo, g, s, args.r, args.k, constants)
    consistent = verify.consistency_check(lca_factory, g, args.seed,
                                          trials=2, orders=args.orders)
    report["consistent"] = consistent
    report["config"] = {
        "command": "verify",
        "graph": args.graph or args.gen,
        "gen_seed": args.gen_seed,
        "algo": args.algo,
        "r": args.r,
        "k": args.k,
        "seed": args.seed,
        "mode": args.mode,
        "budget": args.budget,
        "fault_drop": args.fault_drop,
    }
    report["timestamp"] = time.time()
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    bad = bool(report["stretch_violations"]) or not consistent
    if args.mode == "test" and bad:
        return 1
    return 0


def _sweep_one(task):
    (algo, model, params, gen_seed, seed, r, k, constants, mode,
     budget) = task
    g = generate(model, gen_seed, **params)
    report, _ = run_config(algo, g, seed, r, k, constants, mode, budget)
    return report


def cmd_sweep(args) -> int:
    n_list = [int(x) for x in args.n_list.split(",")]
    seed_list = [int(x) for x in args.seed_list.split(",")]
    constants = parse_constants(args.constants)
    tasks = []
    for n in n_list:
        model, params = parse_gen_spec(args.gen, n_override=n)
        for seed in seed_list:
            tasks.append((args.algo, model, params, args.gen_seed + seed,
                          seed, args.r, args.k, constants, args.mode,
                          args.budget))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_sweep_one, tasks))
    else:
        reports = [_sweep_one(t) for t in tasks]
    columns = ["algo", "n", "m", "param", "seed", "edges", "max_stretch",
               "max_probes", "mean_probes", "failures"]
    rows = []
    failed = 0
    for rep in reports:
        if rep["stretch_violations"]:
            failed += 1
        rows.append({
            "algo": rep["algo"],
            "n": rep["n"],
            "m": rep["m"],
            "param": rep["k_or_r"],
            "seed": rep["seed"],
            "edges": rep["edge_count"],
            "max_stretch": rep["max_stretch"],
            "max_probes": rep["max_probes"],
            "mean_probes": rep["mean_probes"],
            "failures": rep["failure_events"],
        })
    sink = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(sink, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            sink.close()
    return 1 if failed else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="spanner-lca",
        description="local spanner queries over a probe oracle")
    subs = ap.add_subparsers(dest="command", required=True)

    g = subs.add_parser("gen", help="generate a graph file")
    _add_common(g)

    q = subs.add_parser("query", help="single edge query")
    _add_common(q)
    q.add_argument("u", type=int)
    q.add_argument("v", type=int)

    v = subs.add_parser("verify", help="materialize and check one config")
    _add_common(v)
    v.add_argument("--orders", type=int, default=2,
                   help="shuffled query orders in the consistency check")
    v.add_argument("--fault-drop", type=float, default=0.0,
                   help="self-test: drop this fraction of YES answers")

    s = subs.add_parser("sweep", help="cross-product runs to CSV")
    _add_common(s)
    s.add_argument("--n-list", required=True)
    s.add_argument("--seed-list", required=True)
    s.add_argument("--jobs", type=int, default=2)

    args = ap.parse_args(argv)
    if args.command == "gen":
        return cmd_gen(args)
    if args.command == "query":
        return cmd_query(args)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "sweep":
        return cmd_sweep(args)
    return 2


if __name__ == "__main__":
    sys.exit(main())
