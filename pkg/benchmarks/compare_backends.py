"""Times the pure-Python engines against the compiled core on one workload.

Builds a strongly connected random network (a shuffled cycle plus extra
arcs, so every pair is solvable), draws seeded endpoint pairs, and runs
each requested algorithm on both backends.  Fronts are cross-checked on
every run; a timing table is only worth printing if the two backends
still agree.

Usage:
    python benchmarks/compare_backends.py
    python benchmarks/compare_backends.py --states 5000 --extra-arcs 20000 \
        --pairs 30 --algs boa,boa-enh,boba --seed 7
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys

from bobastar._backend import HAVE_SPEEDUPS
from bobastar.boba import ALGORITHMS, solve
from bobastar.graph import BiGraph


def random_network(rng: random.Random, n: int, extra: int, max_w: int) -> BiGraph:
    states = list(range(n))
    rng.shuffle(states)
    arcs = []
    for i in range(n):
        u, v = states[i], states[(i + 1) % n]
        arcs.append((u, v, rng.randint(1, max_w), rng.randint(1, max_w)))
    for _ in range(extra):
        u, v = rng.sample(range(n), 2)
        arcs.append((u, v, rng.randint(1, max_w), rng.randint(1, max_w)))
    return BiGraph.from_arcs(n, arcs)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=3000)
    ap.add_argument("--extra-arcs", type=int, default=12000)
    ap.add_argument("--max-weight", type=int, default=50)
    ap.add_argument("--pairs", type=int, default=20)
    ap.add_argument("--seed", type=int, default=20260818)
    ap.add_argument("--algs", default="boa,boa-enh,boba",
                    help="comma-separated subset of: " + ",".join(ALGORITHMS))
    ap.add_argument("--threads", type=int, default=1, choices=(1, 2),
                    help="worker count for the paired algorithm")
    args = ap.parse_args(argv)

    if not HAVE_SPEEDUPS:
        print("compiled backend unavailable; nothing to compare", file=sys.stderr)
        return 1
    algs = [a for a in args.algs.split(",") if a]
    for a in algs:
        if a not in ALGORITHMS or a == "oracle":
            print(f"unknown or untimeable algorithm {a!r}", file=sys.stderr)
            return 2

    rng = random.Random(args.seed)
    g = random_network(rng, args.states, args.extra_arcs, args.max_weight)
    pairs = [tuple(rng.sample(range(g.n), 2)) for _ in range(args.pairs)]
    print(f"network: {g.n} states, {g.m} arcs; {len(pairs)} pairs; seed {args.seed}")

    header = f"{'alg':8} {'backend':9} {'min ms':>9} {'avg ms':>9} {'max ms':>9} {'expanded':>10}"
    print(header)
    print("-" * len(header))
    avg_by_backend: dict[tuple[str, str], float] = {}
    for alg in algs:
        threads = args.threads if alg == "boba" else 1
        fronts: dict[str, list] = {}
        for backend in ("pure", "compiled"):
            times = []
            expanded = 0
            fronts[backend] = []
            for src, dst in pairs:
                res = solve(g, src, dst, alg=alg, threads=threads,
                            backend=backend, want_paths=False)
                times.append(res.wall_ms)
                expanded += sum(m.expanded for m in res.metrics)
                fronts[backend].append(res.front)
            avg = statistics.fmean(times)
            avg_by_backend[(alg, backend)] = avg
            print(f"{alg:8} {backend:9} {min(times):9.2f} {avg:9.2f} "
                  f"{max(times):9.2f} {expanded:10d}")
        if fronts["pure"] != fronts["compiled"]:
            print(f"front mismatch between backends for {alg}", file=sys.stderr)
            return 1
        ratio = avg_by_backend[(alg, "pure")] / avg_by_backend[(alg, "compiled")]
        print(f"{'':8} speedup {ratio:28.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
