#!/usr/bin/env python3
"""Size/probe scaling sweeps for the three spanner query algorithms.

Writes one CSV per algorithm (spanner-lca sweep format) plus a short
fitted-constant summary on stdout: the observed edge-count and max-probe
ratios against the theoretical shapes, by n.

Usage: python scripts/scaling_sweep.py [--out DIR] [--seeds 1,2,3]
"""

import argparse
import math
import pathlib
import sys

from spanner_lca.cli import main as cli_main


def shape_ratios(csv_path, size_shape, probe_shape):
    import csv as csvmod
    rows = list(csvmod.DictReader(open(csv_path)))
    out = {}
    for row in rows:
        n = int(row["n"])
        out.setdefault(n, []).append(
            (int(row["edges"]) / size_shape(n),
             int(row["max_probes"]) / probe_shape(n)))
    return out


def run(algo, gen, n_list, seeds, out_dir, extra=()):
    path = out_dir / f"{algo}_sweep.csv"
    argv = ["sweep", "--gen", gen, "--algo", algo,
            "--n-list", ",".join(map(str, n_list)),
            "--seed-list", seeds, "--jobs", "2", "--out", str(path),
            *extra]
    code = cli_main(argv)
    if code != 0:
        print(f"{algo}: sweep reported violations (exit {code})",
              file=sys.stderr)
    return path


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="sweep_out")
    ap.add_argument("--seeds", default="1,2,3")
    args = ap.parse_args()
    out_dir = pathlib.Path(args.out)
    out_dir.mkdir(exist_ok=True)

    lg = math.log2
    jobs = [
        ("spanner3", "gnp:p=0.2", [200, 400, 800],
         lambda n: n ** 1.5 * lg(n), lambda n: n ** 0.75 * lg(n) ** 2, ()),
        ("spanner5", "gnp:p=0.1", [200, 400, 800],
         lambda n: n ** (4 / 3) * lg(n) ** 2,
         lambda n: n ** (5 / 6) * lg(n) ** 3, ()),
        ("k2", "regular:d=6", [250, 500, 1000],
         lambda n: n ** 1.5 * lg(n) ** 4,
         lambda n: 6 ** 4 * n ** (2 / 3), ("--k", "2")),
    ]
    for algo, gen, n_list, size_shape, probe_shape, extra in jobs:
        path = run(algo, gen, n_list, args.seeds, out_dir, extra)
        print(f"\n{algo} ({gen}) -> {path}")
        for n, ratios in sorted(shape_ratios(path, size_shape,
                                             probe_shape).items()):
            cs = max(r for r, _ in ratios)
            cp = max(r for _, r in ratios)
            print(f"  n={n:5d}  size_ratio<={cs:8.4f}  probe_ratio<={cp:8.4f}")
    print("\nratios should be flat-or-falling in n if the shapes hold")


if __name__ == "__main__":
    main()
