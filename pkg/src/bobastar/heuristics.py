"""Heuristic precomputation: four lexicographic one-to-all searches.

Phase 1 runs two unbounded searches (cheapest-first-cost out of the source,
cheapest-second-cost into the target).  Their results give the global upper
bounds and the guide potentials for phase 2, which runs the two swapped
searches bounded by those values.  Each search also leaves behind a parent
tree; walking it from any settled state yields an optimal one-criterion
suffix, which the engines splice onto partial paths.
"""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass

import numpy as np

from .graph import INF, AdjView, BiGraph
from .pathstore import NO_ARC


@dataclass
class LexResult:
    """One-to-all lexicographic distances out of a single origin.

    parent[s] is an arc slot in the view OPPOSITE the one searched, so the
    consumer can walk s -> origin using its own travel direction.
    """

    dist_primary: np.ndarray
    dist_secondary: np.ndarray
    parent: np.ndarray
    reached: np.ndarray


def lex_search_py(
    view: AdjView,
    origin: int,
    primary: int,
    guide: np.ndarray | None = None,
    bound: int | None = None,
    mask: np.ndarray | None = None,
) -> LexResult:
    """Dijkstra minimizing (cost[primary], cost[other]) lexicographically.

    guide, when given, must be an exact-distance potential for the primary
    cost (it reweights arcs non-negatively, so settle order stays sound).
    bound is inclusive: labels with guided primary > bound are dropped, and
    the search stops at the first such pop.  mask marks states to treat as
    deleted.
    """
    n = view.n
    dp = np.full(n, INF, dtype=np.int64)
    ds = np.full(n, INF, dtype=np.int64)
    par = np.full(n, NO_ARC, dtype=np.int64)
    reached = np.zeros(n, dtype=bool)

    if mask is not None and mask[origin]:
        return LexResult(dp, ds, par, reached)

    wp = view.c1 if primary == 0 else view.c2
    ws = view.c2 if primary == 0 else view.c1

    f0 = 0 if guide is None else int(guide[origin])
    heap: list[tuple[int, int, int, int, int]] = [(f0, 0, origin, 0, NO_ARC)]
    while heap:
        f, gs, u, gp, pref = heapq.heappop(heap)
        if reached[u]:
            continue
        if bound is not None and f > bound:
            break
        reached[u] = True
        dp[u] = gp
        ds[u] = gs
        par[u] = pref
        for k in view.out_arcs(u):
            v = int(view.to[k])
            if reached[v] or (mask is not None and mask[v]):
                continue
            ngp = gp + int(wp[k])
            nf = ngp if guide is None else ngp + int(guide[v])
            if bound is not None and nf > bound:
                continue
            heapq.heappush(heap, (nf, gs + int(ws[k]), v, ngp, int(view.opp[k])))
    return LexResult(dp, ds, par, reached)


def lex_search(
    view: AdjView,
    origin: int,
    primary: int,
    guide: np.ndarray | None = None,
    bound: int | None = None,
    mask: np.ndarray | None = None,
    backend: str = "auto",
) -> LexResult:
    from . import _backend

    impl = _backend.resolve_lex(backend)
    return impl(view, origin, primary, guide, bound, mask)


def walk_tree(
    tree: np.ndarray, travel: AdjView, state: int
) -> tuple[list[int], tuple[int, int]]:
    """Follow parent arcs from state to the tree root via `travel`.

    Returns the visited states (state first, root last) and the summed
    (c1, c2) of the walked arcs.
    """
    states = [state]
    c1 = 0
    c2 = 0
    x = state
    while True:
        k = int(tree[x])
        if k == NO_ARC:
            return states, (c1, c2)
        c1 += int(travel.c1[k])
        c2 += int(travel.c2[k])
        x = int(travel.to[k])
        states.append(x)


@dataclass
class HeuristicSet:
    """Everything the engines need, all int64 and indexed by state.

    Forward-engine arrays: h1/h2 lower-bound the remaining (c1, c2) to the
    target, ub1/ub2 are the costs of the witness suffixes behind them.
    The primed arrays are the mirror set for the backward engine (remaining
    cost back to the source).  h1p and h2p additionally serve as the tuning
    sinks: each engine tightens the partner's primary array as it expands.
    """

    h1: np.ndarray
    h2: np.ndarray
    ub1: np.ndarray
    ub2: np.ndarray
    h1p: np.ndarray
    h2p: np.ndarray
    ub1p: np.ndarray
    ub2p: np.ndarray
    # Suffix trees: to_goal_* walked via g.fwd, from_start_* via g.rev.
    to_goal_12: np.ndarray
    to_goal_21: np.ndarray
    from_start_12: np.ndarray
    from_start_21: np.ndarray
    reached_fwd_12: np.ndarray
    reached_rev_21: np.ndarray
    reached_fwd_21: np.ndarray
    reached_rev_12: np.ndarray
    global_ub1: int
    global_ub2: int

    def dump(self, writer) -> None:
        writer.write("u %d %d\n" % (self.global_ub1, self.global_ub2))

        def cell(a, s):
            v = int(a[s])
            return "inf" if v >= INF else str(v)

        for s in range(len(self.h1)):
            writer.write(
                "h %d %s %s %s %s %s %s %s %s\n"
                % (
                    s,
                    cell(self.h1, s), cell(self.h2, s),
                    cell(self.ub1, s), cell(self.ub2, s),
                    cell(self.h1p, s), cell(self.h2p, s),
                    cell(self.ub1p, s), cell(self.ub2p, s),
                )
            )


def _run_pair(jobs, workers: int):
    """Run two independent searches, optionally on two threads."""
    if workers < 2:
        return [job() for job in jobs]
    out = [None, None]

    def call(i):
        out[i] = jobs[i]()

    threads = [threading.Thread(target=call, args=(i,)) for i in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    return out


def compute_all_heuristics(
    g: BiGraph,
    source: int,
    target: int,
    workers: int = 1,
    backend: str = "auto",
) -> HeuristicSet | None:
    """Two-phase precomputation; None when target is unreachable.

    Phase 1 is exhaustive so the arrays never depend on worker count.
    Phase 2 prunes with the phase-1 bounds: anything outside them cannot
    lie on a non-dominated source-target path.
    """
    from . import _backend

    impl = _backend.resolve_lex(backend)

    fwd1 = lambda: impl(g.fwd, source, 0, None, None, None)
    rev2 = lambda: impl(g.rev, target, 1, None, None, None)
    l_fwd1, l_rev2 = _run_pair((fwd1, rev2), workers)

    if not l_fwd1.reached[target]:
        return None
    global_ub2 = int(l_fwd1.dist_secondary[target])
    global_ub1 = int(l_rev2.dist_secondary[source])

    fwd2 = lambda: impl(
        g.fwd, source, 1, l_rev2.dist_primary, global_ub2, ~l_rev2.reached
    )
    rev1 = lambda: impl(
        g.rev, target, 0, l_fwd1.dist_primary, global_ub1, ~l_fwd1.reached
    )
    l_fwd2, l_rev1 = _run_pair((fwd2, rev1), workers)

    return HeuristicSet(
        h1=l_rev1.dist_primary,
        h2=l_rev2.dist_primary,
        ub1=l_rev2.dist_secondary,
        ub2=l_rev1.dist_secondary,
        h1p=l_fwd1.dist_primary,
        h2p=l_fwd2.dist_primary,
        ub1p=l_fwd2.dist_secondary,
        ub2p=l_fwd1.dist_secondary,
        to_goal_12=l_rev1.parent,
        to_goal_21=l_rev2.parent,
        from_start_12=l_fwd1.parent,
        from_start_21=l_fwd2.parent,
        reached_fwd_12=l_fwd1.reached,
        reached_rev_21=l_rev2.reached,
        reached_fwd_21=l_fwd2.reached,
        reached_rev_12=l_rev1.reached,
        global_ub1=global_ub1,
        global_ub2=global_ub2,
    )
