"""The single-direction bi-objective engine.

One implementation runs four ways: travel direction (out of the source, or
out of the target over reversed arcs) crossed with which cost component is
primary.  The engine pops nodes in non-decreasing primary-f order, keeps a
per-state secondary watermark, and emits a cost-unique solution list.

The enhanced mode adds five behaviors on top of the baseline:
stop once a popped primary-f reaches the partner's bound; publish the first
expansion's primary g as a tightened lower bound for the opposite engine;
splice a precomputed suffix onto a partial path when that already beats the
secondary bound (recording the solution early); drop the previous solution
when a new one ties its primary cost; and refuse to generate nodes whose
primary-f already violates the partner bound.

Bound cells and tuning arrays are shared between paired engines; everything
else here is engine-private.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import INF, AdjView, BiGraph
from .heuristics import HeuristicSet, walk_tree
from .pathstore import NO_ARC, NodePool, PathStore, prefix_path, prefix_path_conventional
from .pqueue import FrontierQueue

# Solution.ref value for the pre-loop extreme paths (no recorded prefix).
SEED_REF = -1


class SharedBounds:
    """Two monotone cost cells: cells[0] caps c1, cells[1] caps c2.

    Exactly one engine writes each cell (the one whose secondary cost it
    is), so lower() needs no lock: the element store is indivisible and
    the value only ever decreases.  Kept as an int64 buffer so a compiled
    engine pair can share the same two words.
    """

    __slots__ = ("cells",)

    def __init__(self, ub1: int = INF, ub2: int = INF):
        self.cells = np.array([ub1, ub2], dtype=np.int64)

    def read(self, i: int) -> int:
        return int(self.cells[i])

    def lower(self, i: int, v: int) -> None:
        if v < self.cells[i]:
            self.cells[i] = v


@dataclass
class SearchProfile:
    """The per-engine wiring: views, endpoints, and heuristic columns.

    hp/up always belong to the engine's own primary cost, hq/uq to its
    secondary.  tree is the primary-optimal suffix tree, walked via
    travel.  tune_out is the array this engine tightens for its partner
    (the partner reads it as hq); None leaves tuning disconnected.
    """

    travel: AdjView
    in_view: AdjView
    origin: int
    target: int
    p: int  # primary cost component: 0 for c1, 1 for c2
    hp: np.ndarray
    hq: np.ndarray
    up: np.ndarray
    uq: np.ndarray
    tree: np.ndarray
    tune_out: np.ndarray | None
    label: str


def make_profile(
    g: BiGraph,
    hs: HeuristicSet,
    source: int,
    target: int,
    direction: str,
    order: str,
) -> SearchProfile:
    if direction not in ("fwd", "bwd"):
        raise ValueError(f"unknown direction {direction!r}")
    if order not in ("12", "21"):
        raise ValueError(f"unknown order {order!r}")
    fwd = direction == "fwd"
    p = 0 if order == "12" else 1
    if fwd:
        travel, in_view, origin, goal = g.fwd, g.rev, source, target
        cols = (
            (hs.h1, hs.h2, hs.ub1, hs.ub2, hs.to_goal_12, hs.h1p)
            if p == 0
            else (hs.h2, hs.h1, hs.ub2, hs.ub1, hs.to_goal_21, hs.h2p)
        )
    else:
        travel, in_view, origin, goal = g.rev, g.fwd, target, source
        cols = (
            (hs.h1p, hs.h2p, hs.ub1p, hs.ub2p, hs.from_start_12, hs.h1)
            if p == 0
            else (hs.h2p, hs.h1p, hs.ub2p, hs.ub1p, hs.from_start_21, hs.h2)
        )
    hp, hq, up, uq, tree, tune = cols
    return SearchProfile(
        travel=travel,
        in_view=in_view,
        origin=origin,
        target=goal,
        p=p,
        hp=hp,
        hq=hq,
        up=up,
        uq=uq,
        tree=tree,
        tune_out=tune,
        label=f"{direction}-{order}",
    )


@dataclass
class Solution:
    """One front entry in engine order: cp is the engine's primary cost.

    ref is a path id into the engine's PathStore (compact mode), a pool
    slot (conventional mode), or SEED_REF for the pre-loop extremes whose
    prefix is just the origin.
    """

    cp: int
    cq: int
    state: int
    ref: int
    needs_suffix: bool

    def oriented(self, p: int) -> tuple[int, int]:
        """Costs as (c1, c2) regardless of engine order."""
        return (self.cp, self.cq) if p == 0 else (self.cq, self.cp)


def last_solution_check(items: list[Solution], new_primary: int) -> bool:
    """Drop the trailing solution iff it ties new_primary.

    Solutions arrive in non-decreasing primary cost, so an equal-primary
    newcomer strictly improves the secondary and the old entry is
    dominated.  Anything with a smaller primary is final.  Returns True
    when an entry was removed.
    """
    if items and items[-1].cp == new_primary:
        items.pop()
        return True
    return False


class SolutionList:
    __slots__ = ("items", "replaced")

    def __init__(self):
        self.items: list[Solution] = []
        self.replaced = 0

    def append_checked(self, sol: Solution) -> None:
        if last_solution_check(self.items, sol.cp):
            self.replaced += 1
        self.items.append(sol)

    def __len__(self) -> int:
        return len(self.items)


@dataclass
class RunMetrics:
    """Counter block every run reports; one instance per engine.

    generated counts queue insertions including the origin push, expanded
    counts successor loops actually entered.  Pool and store figures are
    copied in by finish().
    """

    label: str = ""
    pops: int = 0
    expanded: int = 0
    generated: int = 0
    pruned_pop: int = 0
    pruned_gen: int = 0
    tune_writes: int = 0
    goal_solutions: int = 0
    early_solutions: int = 0
    seed_solutions: int = 0
    replaced: int = 0
    skipped_sole: int = 0
    peak_open: int = 0
    broke: bool = False
    solutions: int = 0
    peak_live: int = 0
    pool_reuses: int = 0
    pool_size: int = 0
    store_entries: int = 0
    wall_ms: float = 0.0

    @property
    def pruned(self) -> int:
        return self.pruned_pop + self.pruned_gen

    def mem_bytes(self) -> int:
        # Portable record-count estimate: 7 word-sized pool fields plus
        # two words per backtracking record.
        return self.peak_live * 7 * 8 + self.store_entries * 2 * 8


class Engine:
    """One direction of the search; see the module docstring.

    step() processes one queue pop end to end and returns False once the
    engine has finished (queue drained or bound break).  Node records are
    released back to the pool at pop time, before the expansion that may
    immediately reuse them; surviving pops first persist their parent
    link, so reconstruction never needs the pool in compact mode.
    """

    def __init__(
        self,
        profile: SearchProfile,
        bounds: SharedBounds,
        enhanced: bool = True,
        tuning: bool = True,
        compact: bool = True,
        queue: str = "heap",
        trace: list | None = None,
    ):
        self.profile = profile
        self.bounds = bounds
        self.enhanced = enhanced
        self.tuning = tuning and profile.tune_out is not None
        self.compact = compact
        self.trace = trace

        n = profile.travel.n
        self.own = 1 - profile.p
        self.partner = profile.p
        self.gmin = np.full(n, INF, dtype=np.int64)
        # The bound cell doubles as the watermark at the target state.
        start_bound = bounds.read(self.own)
        if start_bound < INF:
            self.gmin[profile.target] = start_bound

        self.wp = profile.travel.c1 if profile.p == 0 else profile.travel.c2
        self.wq = profile.travel.c2 if profile.p == 0 else profile.travel.c1

        self.pool = NodePool(recycle=compact)
        self.store = PathStore(n)
        self.solutions = SolutionList()
        self.metrics = RunMetrics(label=profile.label)
        self.finished = False

        lo = int(profile.hp[profile.origin])
        if lo >= INF:
            # Origin cannot reach the target at all; nothing to do.
            self.queue = None
            self.finished = True
            return
        if queue == "bucket":
            hi = bounds.read(self.partner)
            if hi >= INF:
                # Open-ended run: size for every push the watermark
                # pruning can let through, with slack for reissued states.
                hi = lo + 2 * int(np.sum(self.wp, dtype=np.int64)) + 3
            self.queue = FrontierQueue("bucket", lo, hi)
        else:
            self.queue = FrontierQueue("heap")

        fq0 = int(profile.hq[profile.origin])
        slot = self.pool.acquire(profile.origin, 0, 0, lo, fq0, NO_ARC, 0)
        self.queue.push(lo, fq0, slot)
        self.metrics.generated = 1
        self.metrics.peak_open = 1

    def seed_extreme(self) -> None:
        """Emit the origin's primary-optimal path before the loop starts.

        Used in paired mode, where the bound cells are pre-set to exactly
        these two extremes and the in-loop searches only ever find paths
        strictly inside them.
        """
        pr = self.profile
        if pr.hp[pr.origin] >= INF:
            return
        sol = Solution(int(pr.hp[pr.origin]), int(pr.uq[pr.origin]), pr.origin, SEED_REF, True)
        self.solutions.append_checked(sol)
        self.metrics.seed_solutions += 1
        if self.trace is not None:
            self.trace.append(("solution", "seed", sol.cp, sol.cq))

    def run(self) -> None:
        while self.step():
            pass

    def step(self) -> bool:
        if self.finished:
            return False
        queue = self.queue
        ref = queue.pop_min()
        if ref is None:
            self.finished = True
            self._finish()
            return False

        pool = self.pool
        state = pool.state[ref]
        gp = pool.gp[ref]
        gq = pool.gq[ref]
        fp = pool.fp[ref]
        fq = pool.fq[ref]
        pref = pool.pref[ref]
        ppid = pool.ppid[ref]
        pool.release(ref)

        m = self.metrics
        m.pops += 1
        tr = self.trace
        if tr is not None:
            tr.append(("pop", state, gp, gq, fp, fq))

        bounds = self.bounds
        if self.enhanced and fp >= bounds.read(self.partner):
            m.broke = True
            if tr is not None:
                tr.append(("break", fp, bounds.read(self.partner)))
            self.finished = True
            self._finish()
            return False

        gmin = self.gmin
        if gq >= gmin[state] or fq >= bounds.read(self.own):
            m.pruned_pop += 1
            if tr is not None:
                tr.append(("prune_pop", state))
            return True

        pr = self.profile
        if self.enhanced and self.tuning and gmin[state] >= INF:
            pr.tune_out[state] = gp
            m.tune_writes += 1
            if tr is not None:
                tr.append(("tune", state, gp))
        gmin[state] = gq

        # Persist the parent link while the popped fields are still in
        # hand; children generated below reference it by id (compact) or
        # by the retained slot (conventional).
        if self.compact:
            myref = self.store.record(state, pref, ppid)
            if tr is not None:
                tr.append(("record", state, myref))
        else:
            myref = ref

        if state == pr.target:
            # fq == gq and fp == gp here: both self-heuristics are zero.
            bounds.lower(self.own, gq)
            if tr is not None:
                tr.append(("bound", gq))
            sol = Solution(gp, gq, state, myref, False)
            self.solutions.append_checked(sol)
            m.goal_solutions += 1
            if tr is not None:
                tr.append(("solution", "goal", gp, gq))
            return True

        if self.enhanced:
            joined = gq + int(pr.uq[state])
            if joined < bounds.read(self.own):
                bounds.lower(self.own, joined)
                gmin[pr.target] = joined
                if tr is not None:
                    tr.append(("bound", joined))
                sol = Solution(fp, joined, state, myref, True)
                self.solutions.append_checked(sol)
                m.early_solutions += 1
                if tr is not None:
                    tr.append(("solution", "early", fp, joined))
                if pr.hp[state] == pr.up[state]:
                    # Both suffix trees agree on the primary cost, so the
                    # spliced path is the only non-dominated continuation.
                    m.skipped_sole += 1
                    if tr is not None:
                        tr.append(("skip_sole", state))
                    return True

        m.expanded += 1
        if tr is not None:
            tr.append(("expand", state))
        travel = pr.travel
        to = travel.to
        opp = travel.opp
        wp = self.wp
        wq = self.wq
        hp = pr.hp
        hq = pr.hq
        enhanced = self.enhanced
        own = self.own
        partner = self.partner
        for k in travel.out_arcs(state):
            t = int(to[k])
            if hp[t] >= INF:
                m.pruned_gen += 1
                if tr is not None:
                    tr.append(("prune_gen", t, "inf"))
                continue
            ngp = gp + int(wp[k])
            ngq = gq + int(wq[k])
            nfq = ngq + int(hq[t])
            if ngq >= gmin[t] or nfq >= bounds.read(own):
                m.pruned_gen += 1
                if tr is not None:
                    tr.append(("prune_gen", t, "secondary"))
                continue
            nfp = ngp + int(hp[t])
            if enhanced and nfp >= bounds.read(partner):
                m.pruned_gen += 1
                if tr is not None:
                    tr.append(("prune_gen", t, "primary"))
                continue
            slot = self.pool.acquire(t, ngp, ngq, nfp, nfq, int(opp[k]), myref)
            queue.push(nfp, nfq, slot)
            m.generated += 1
            if len(queue) > m.peak_open:
                m.peak_open = len(queue)
            if tr is not None:
                tr.append(("push", t, ngp, ngq, nfp, nfq))
        return True

    def _finish(self) -> None:
        m = self.metrics
        m.solutions = len(self.solutions)
        m.replaced = self.solutions.replaced
        m.peak_live = self.pool.peak_live
        m.pool_reuses = self.pool.reuses
        m.pool_size = len(self.pool.state)
        m.store_entries = self.store.entries

    def reconstruct(self, sol: Solution) -> list[int]:
        """States of one solution path, origin first, in travel order."""
        pr = self.profile
        if sol.ref == SEED_REF:
            states = [pr.origin]
        elif self.compact:
            states = prefix_path(self.store, pr.in_view, sol.state, sol.ref)
        else:
            states = prefix_path_conventional(self.pool, sol.ref)
        if sol.needs_suffix:
            suffix, _cost = walk_tree(pr.tree, pr.travel, sol.state)
            states = states + suffix[1:]
        return states
