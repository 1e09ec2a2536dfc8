"""Command-line front end.

Subcommands: solve a single query, bench a pairs file into CSV,
gen-pairs for reproducible random endpoint lists, verify an engine
against the brute-force oracle.  Node ids on the wire are 1-based to
match DIMACS .gr files; internally everything is 0-based.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys

from .boba import ALGORITHMS, solve
from .graph import BiGraph, DimacsError, TopologyMismatchError, build_bigraph, parse_dimacs_gr
from .oracle import pareto_oracle
from .search import RunMetrics


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gr1", required=True, help="DIMACS .gr file with the first cost")
    p.add_argument("--gr2", required=True, help="DIMACS .gr file with the second cost")


def _add_engine_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alg", choices=ALGORITHMS, default="boba")
    p.add_argument("--order", choices=("12", "21"), default="12")
    p.add_argument("--direction", choices=("fwd", "bwd"), default="fwd")
    p.add_argument("--queue", choices=("bucket", "heap"), default="heap")
    p.add_argument("--threads", type=int, choices=(1, 2), default=1)
    p.add_argument("--tuning", choices=("on", "off"), default="on")
    p.add_argument("--backtrack", choices=("compact", "conventional"), default="compact")
    p.add_argument("--backend", choices=("auto", "pure", "compiled"), default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bobastar",
        description="Bi-objective point-to-point shortest paths.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve one source/target query")
    _add_graph_args(ps)
    _add_engine_args(ps)
    ps.add_argument("--source", required=True, type=int, help="source id, 1-based")
    ps.add_argument("--target", required=True, type=int, help="target id, 1-based")
    ps.add_argument("--paths", action="store_true", help="emit one p-line per solution")
    ps.add_argument("--out", help="write the front here instead of stdout")
    ps.add_argument("--dump-heuristics", help="write the per-state heuristic table here")

    pb = sub.add_parser("bench", help="run a pairs file, emit per-pair metrics CSV")
    _add_graph_args(pb)
    _add_engine_args(pb)
    pb.add_argument("--pairs", required=True, help="file of '<src> <dst>' lines, 1-based")
    pb.add_argument("--csv", help="write CSV here instead of stdout")

    pg = sub.add_parser("gen-pairs", help="generate random distinct endpoint pairs")
    pg.add_argument("--n-states", required=True, type=int)
    pg.add_argument("--count", required=True, type=int)
    pg.add_argument("--seed", required=True, type=int)
    pg.add_argument("--out", help="write pairs here instead of stdout")

    pv = sub.add_parser("verify", help="check an engine's front against the oracle")
    _add_graph_args(pv)
    _add_engine_args(pv)
    pv.add_argument("--source", required=True, type=int)
    pv.add_argument("--target", required=True, type=int)

    return parser


def _load_graph(parser: argparse.ArgumentParser, args) -> BiGraph:
    try:
        with open(args.gr1) as fh:
            first = parse_dimacs_gr(fh)
        with open(args.gr2) as fh:
            second = parse_dimacs_gr(fh)
        return build_bigraph(first, second)
    except (OSError, DimacsError, TopologyMismatchError) as exc:
        print(f"bobastar: {exc}", file=sys.stderr)
        raise SystemExit(1)


def _endpoint(parser: argparse.ArgumentParser, g: BiGraph, value: int, name: str) -> int:
    if not (1 <= value <= g.n):
        parser.error(f"--{name} {value} outside 1..{g.n}")
    return value - 1


def format_front(front, paths=None) -> str:
    lines = [f"c {len(front)} solutions"]
    for i, (c1, c2) in enumerate(front):
        lines.append(f"s {c1} {c2}")
        if paths is not None:
            lines.append("p " + " ".join(str(v + 1) for v in paths[i]))
    return "\n".join(lines) + "\n"


def parse_front(text: str):
    """Inverse of format_front; returns (front, paths-or-None)."""
    front = []
    paths = None
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "s":
            front.append((int(parts[1]), int(parts[2])))
        elif parts[0] == "p":
            if paths is None:
                paths = []
            paths.append([int(v) - 1 for v in parts[1:]])
    return front, paths


def _run_solve(parser, args) -> int:
    g = _load_graph(parser, args)
    source = _endpoint(parser, g, args.source, "source")
    target = _endpoint(parser, g, args.target, "target")
    result = solve(
        g, source, target,
        alg=args.alg, order=args.order, direction=args.direction,
        queue=args.queue, threads=args.threads, tuning=args.tuning == "on",
        compact=args.backtrack == "compact", backend=args.backend,
        want_paths=args.paths,
    )
    if args.dump_heuristics:
        if result.heuristics is not None:
            with open(args.dump_heuristics, "w") as fh:
                result.heuristics.dump(fh)
        else:
            print("bobastar: no heuristics to dump for this run", file=sys.stderr)
    text = format_front(result.front, result.paths if args.paths else None)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


_CSV_FIELDS = (
    "pair", "src", "dst", "alg", "wall_ms", "solutions", "generated",
    "expanded", "pruned", "peak_open", "peak_live", "store_entries",
    "mem_bytes",
)


def _combined_metrics(result) -> dict:
    """One row per run; paired engines report summed counters."""
    total = RunMetrics()
    for m in result.metrics:
        total.generated += m.generated
        total.expanded += m.expanded
        total.pruned_pop += m.pruned_pop
        total.pruned_gen += m.pruned_gen
        total.peak_open += m.peak_open
        total.peak_live += m.peak_live
        total.store_entries += m.store_entries
    return {
        "alg": result.alg,
        "wall_ms": round(result.wall_ms, 3),
        "solutions": len(result.front),
        "generated": total.generated,
        "expanded": total.expanded,
        "pruned": total.pruned,
        "peak_open": total.peak_open,
        "peak_live": total.peak_live,
        "store_entries": total.store_entries,
        "mem_bytes": total.mem_bytes(),
    }


def _run_bench(parser, args) -> int:
    g = _load_graph(parser, args)
    try:
        with open(args.pairs) as fh:
            raw = [line.split() for line in fh if line.strip()]
    except OSError as exc:
        print(f"bobastar: {exc}", file=sys.stderr)
        return 1
    pairs = []
    for lineno, parts in enumerate(raw, 1):
        if len(parts) != 2:
            print(f"bobastar: pairs line {lineno}: expected two ids", file=sys.stderr)
            return 1
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            print(f"bobastar: pairs line {lineno}: bad id", file=sys.stderr)
            return 1
        if not (1 <= a <= g.n and 1 <= b <= g.n):
            print(f"bobastar: pairs line {lineno}: id outside 1..{g.n}", file=sys.stderr)
            return 1
        pairs.append((a - 1, b - 1))

    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=_CSV_FIELDS)
        writer.writeheader()
        rows = []
        for i, (src, dst) in enumerate(pairs, 1):
            result = solve(
                g, src, dst,
                alg=args.alg, order=args.order, direction=args.direction,
                queue=args.queue, threads=args.threads,
                tuning=args.tuning == "on",
                compact=args.backtrack == "compact", backend=args.backend,
                want_paths=False,
            )
            row = {"pair": i, "src": src + 1, "dst": dst + 1}
            row.update(_combined_metrics(result))
            writer.writerow(row)
            rows.append(row)
        if rows:
            numeric = [f for f in _CSV_FIELDS if f not in ("pair", "src", "dst", "alg")]

            def foot(label, agg):
                writer.writerow(
                    {"pair": label, "src": "", "dst": "", "alg": args.alg}
                    | {f: agg([r[f] for r in rows]) for f in numeric}
                )

            foot("min", min)
            foot("avg", lambda vals: round(sum(vals) / len(vals), 3))
            foot("max", max)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _run_gen_pairs(parser, args) -> int:
    if args.n_states < 2:
        parser.error("--n-states must be at least 2")
    if args.count < 1:
        parser.error("--count must be at least 1")
    rng = random.Random(args.seed)
    lines = []
    for _ in range(args.count):
        a = rng.randrange(1, args.n_states + 1)
        b = rng.randrange(1, args.n_states)
        if b >= a:  # resample-free distinct draw
            b += 1
        lines.append(f"{a} {b}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _run_verify(parser, args) -> int:
    g = _load_graph(parser, args)
    source = _endpoint(parser, g, args.source, "source")
    target = _endpoint(parser, g, args.target, "target")
    expected = pareto_oracle(g, source, target)
    result = solve(
        g, source, target,
        alg=args.alg if args.alg != "oracle" else "boba",
        order=args.order, direction=args.direction,
        queue=args.queue, threads=args.threads, tuning=args.tuning == "on",
        compact=args.backtrack == "compact", backend=args.backend,
        want_paths=False,
    )
    if result.front == expected:
        print(f"ok {len(expected)} solutions")
        return 0
    print(f"mismatch: engine {result.front} oracle {expected}", file=sys.stderr)
    return 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _run_solve(parser, args)
        if args.command == "bench":
            return _run_bench(parser, args)
        if args.command == "gen-pairs":
            return _run_gen_pairs(parser, args)
        return _run_verify(parser, args)
    except RuntimeError as exc:
        # e.g. --backend compiled without the extension built
        print(f"bobastar: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
