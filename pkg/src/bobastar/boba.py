"""Pairing, scheduling, and front assembly.

solve() is the one entry point: it precomputes heuristics, runs either a
single engine or the forward/backward pair, and returns the merged front
with reconstructed paths.  The paired engines communicate only through
the two bound cells and the two tuning arrays; on one worker they are
stepped round-robin (reproducible), on two workers each gets a thread.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

from .graph import BiGraph
from .heuristics import HeuristicSet, compute_all_heuristics
from .oracle import pareto_oracle_with_paths
from .search import RunMetrics, SharedBounds, make_profile

ALGORITHMS = ("oracle", "boa", "boa-enh", "boba")


@dataclass
class SolveResult:
    alg: str
    front: list[tuple[int, int]]
    paths: list[list[int]] | None
    metrics: list[RunMetrics]
    heuristics: HeuristicSet | None
    wall_ms: float


def _merge_tagged(entries):
    """entries: (c1, c2, rank, payload), rank breaking exact-cost ties.

    Keeps the first of each c1 value and drops anything weakly dominated,
    leaving c1 strictly increasing and c2 strictly decreasing.
    """
    entries.sort(key=lambda e: (e[0], e[1], e[2]))
    kept = []
    last_c1 = None
    best_c2 = None
    for c1, c2, _rank, payload in entries:
        if last_c1 is not None and c1 == last_c1:
            continue
        if best_c2 is not None and c2 >= best_c2:
            continue
        kept.append((c1, c2, payload))
        last_c1 = c1
        best_c2 = c2
    return kept


def merge_fronts(
    sol_fwd: list[tuple[int, int]], sol_bwd: list[tuple[int, int]]
) -> list[tuple[int, int]]:
    """Union of the two engines' (c1, c2) fronts, dominance-filtered.

    The forward list arrives sorted by c1, the backward one by c2; only
    the seam between them can hold duplicates or a dominated straggler.
    """
    entries = [(c1, c2, 0, None) for c1, c2 in sol_fwd]
    entries += [(c1, c2, 1, None) for c1, c2 in sol_bwd]
    return [(c1, c2) for c1, c2, _ in _merge_tagged(entries)]


def _flip(order: str) -> str:
    return "21" if order == "12" else "12"


def solve(
    g: BiGraph,
    source: int,
    target: int,
    alg: str = "boba",
    order: str = "12",
    direction: str = "fwd",
    queue: str = "heap",
    threads: int = 1,
    tuning: bool = True,
    compact: bool = True,
    backend: str = "auto",
    want_paths: bool = True,
    trace: list | None = None,
) -> SolveResult:
    if alg not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {alg!r}")
    if not (0 <= source < g.n and 0 <= target < g.n):
        raise ValueError(f"endpoint out of range for {g.n} states")
    if threads not in (1, 2):
        raise ValueError("threads must be 1 or 2")

    t0 = time.perf_counter()
    if alg == "oracle":
        found = pareto_oracle_with_paths(g, source, target)
        return SolveResult(
            alg=alg,
            front=[cost for cost, _ in found],
            paths=[path for _, path in found] if want_paths else None,
            metrics=[],
            heuristics=None,
            wall_ms=(time.perf_counter() - t0) * 1000.0,
        )

    workers = threads if alg == "boba" else 1
    hs = compute_all_heuristics(g, source, target, workers=workers, backend=backend)
    if hs is None:
        return SolveResult(
            alg=alg,
            front=[],
            paths=[] if want_paths else None,
            metrics=[],
            heuristics=None,
            wall_ms=(time.perf_counter() - t0) * 1000.0,
        )

    from . import _backend

    engine_cls = _backend.resolve_engine(backend)

    if alg == "boba":
        bounds = SharedBounds(hs.global_ub1, hs.global_ub2)
        profiles = [
            make_profile(g, hs, source, target, "fwd", order),
            make_profile(g, hs, source, target, "bwd", _flip(order)),
        ]
        engines = [
            engine_cls(
                pr,
                bounds,
                enhanced=True,
                tuning=tuning,
                compact=compact,
                queue=queue,
                trace=trace if (threads == 1 and i == 0) else None,
            )
            for i, pr in enumerate(profiles)
        ]
        for eng in engines:
            eng.seed_extreme()
        if threads == 1:
            live = True
            while live:
                live = False
                for eng in engines:
                    if eng.step():
                        live = True
        else:
            ts = [threading.Thread(target=eng.run) for eng in engines]
            for t in ts:
                t.start()
            for t in ts:
                t.join()
    else:
        bounds = SharedBounds()
        profile = make_profile(g, hs, source, target, direction, order)
        engines = [
            engine_cls(
                profile,
                bounds,
                enhanced=(alg == "boa-enh"),
                tuning=tuning,
                compact=compact,
                queue=queue,
                trace=trace,
            )
        ]
        engines[0].run()

    entries = []
    for rank, eng in enumerate(engines):
        eng._finish()
        for sol in eng.solutions.items:
            c1, c2 = sol.oriented(eng.profile.p)
            entries.append((c1, c2, rank, (eng, sol)))
    kept = _merge_tagged(entries)

    front = [(c1, c2) for c1, c2, _ in kept]
    paths = None
    if want_paths:
        paths = []
        for _c1, _c2, (eng, sol) in kept:
            states = eng.reconstruct(sol)
            if eng.profile.travel is g.rev:
                states = states[::-1]
            paths.append(states)

    wall_ms = (time.perf_counter() - t0) * 1000.0
    for eng in engines:
        eng.metrics.wall_ms = wall_ms
    return SolveResult(
        alg=alg,
        front=front,
        paths=paths,
        metrics=[eng.metrics for eng in engines],
        heuristics=hs,
        wall_ms=wall_ms,
    )
