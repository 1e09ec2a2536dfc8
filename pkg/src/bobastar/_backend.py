"""Backend selection: compiled kernels when present, pure Python otherwise.

The compiled module is optional by design (the build falls back to pure
Python when no compiler is around), and BOBASTAR_PURE=1 forces the pure
path even when it built fine.  Both backends implement identical
semantics; single-worker runs produce identical fronts and counters.
"""

from __future__ import annotations

import os

import numpy as np

from .graph import INF
from .heuristics import LexResult
from .pathstore import NO_ARC
from .pqueue import MAX_BUCKET_SPAN

try:
    from . import _speedups
except ImportError:
    _speedups = None

FORCED_PURE = os.environ.get("BOBASTAR_PURE", "") == "1"
HAVE_SPEEDUPS = _speedups is not None and not FORCED_PURE


def backend_name(backend: str = "auto") -> str:
    if backend not in ("auto", "pure", "compiled"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "auto":
        return "compiled" if HAVE_SPEEDUPS else "pure"
    if backend == "compiled" and not HAVE_SPEEDUPS:
        raise RuntimeError(
            "compiled backend unavailable"
            + (" (BOBASTAR_PURE=1)" if FORCED_PURE and _speedups is not None else "")
        )
    return backend


def _lex_compiled(view, origin, primary, guide, bound, mask):
    n = view.n
    dp = np.full(n, INF, dtype=np.int64)
    ds = np.full(n, INF, dtype=np.int64)
    par = np.full(n, NO_ARC, dtype=np.int64)
    reached = np.zeros(n, dtype=np.uint8)
    guide_arr = np.zeros(n, dtype=np.int64) if guide is None else guide
    mask_arr = np.zeros(n, dtype=np.uint8) if mask is None else mask.astype(np.uint8)
    _speedups.lex_search_fill(
        view.head, view.to, view.c1, view.c2, view.opp,
        origin, primary,
        guide_arr, INF if bound is None else int(bound), mask_arr,
        dp, ds, par, reached,
    )
    return LexResult(dp, ds, par, reached.astype(bool))


def resolve_lex(backend: str = "auto"):
    from .heuristics import lex_search_py

    return _lex_compiled if backend_name(backend) == "compiled" else lex_search_py


def resolve_engine(backend: str = "auto"):
    from .search import Engine

    return CompiledEngine if backend_name(backend) == "compiled" else Engine


class CompiledEngine:
    """Drop-in for search.Engine backed by the compiled core.

    Same construction and stepping surface; solution and backtracking
    data live in C during the run and are mirrored into the usual Python
    structures by _finish().
    """

    def __init__(
        self,
        profile,
        bounds,
        enhanced: bool = True,
        tuning: bool = True,
        compact: bool = True,
        queue: str = "heap",
        trace: list | None = None,
    ):
        if trace is not None:
            raise ValueError("step tracing requires the pure engine")
        from .search import RunMetrics, SolutionList

        self.profile = profile
        self.bounds = bounds
        self.compact = compact
        self.solutions = SolutionList()
        self.metrics = RunMetrics(label=profile.label)
        self._finished_flag = False
        self._mirrored = False
        self._prefix_index: dict[tuple[int, int], int] | None = None

        lo = int(profile.hp[profile.origin])
        if lo >= INF:
            self._core = None
            self._finished_flag = True
            return

        use_bucket = queue == "bucket"
        hi = 0
        if use_bucket:
            hi = bounds.read(profile.p)
            if hi >= INF:
                wp = profile.travel.c1 if profile.p == 0 else profile.travel.c2
                hi = lo + 2 * int(np.sum(wp, dtype=np.int64)) + 3
            if hi - lo + 1 > MAX_BUCKET_SPAN:
                raise ValueError(
                    f"bucket span {hi - lo + 1} exceeds {MAX_BUCKET_SPAN}; use the heap queue"
                )

        tune = profile.tune_out
        self._core = _speedups.EngineCore(
            profile.travel.head, profile.travel.to,
            profile.travel.c1, profile.travel.c2, profile.travel.opp,
            profile.hp, profile.hq, profile.up, profile.uq,
            tune if (tuning and tune is not None) else None,
            bounds.cells,
            profile.origin, profile.target, profile.p,
            enhanced, compact, use_bucket, lo, hi,
        )

    @property
    def finished(self) -> bool:
        return self._finished_flag or self._core.finished

    def seed_extreme(self) -> None:
        if self._core is not None:
            self._core.seed_extreme()

    def step(self) -> bool:
        if self._core is None:
            return False
        return self._core.step()

    def run(self) -> None:
        if self._core is not None:
            self._core.run()
        self._finished_flag = True

    def _finish(self) -> None:
        if self._core is None or self._mirrored:
            return
        self._mirrored = True
        from .search import Solution

        m = self.metrics
        (
            m.pops, m.expanded, m.generated, m.pruned_pop, m.pruned_gen,
            m.tune_writes, m.goal_solutions, m.early_solutions,
            m.seed_solutions, m.replaced, m.skipped_sole, m.peak_open,
            broke, m.peak_live, m.pool_reuses, m.pool_size, m.store_entries,
        ) = self._core.counters()
        m.broke = bool(broke)
        self.solutions.replaced = m.replaced
        for i in range(self._core.solution_count()):
            cp, cq, state, ref, needs_suffix = self._core.solution(i)
            self.solutions.items.append(Solution(cp, cq, state, ref, bool(needs_suffix)))
        m.solutions = len(self.solutions)

    def reconstruct(self, sol) -> list[int]:
        from .heuristics import walk_tree
        from .search import SEED_REF

        pr = self.profile
        if sol.ref == SEED_REF:
            states = [pr.origin]
        elif self.compact:
            states = self._prefix_compact(sol.state, sol.ref)
        else:
            states = self._prefix_conventional(sol.ref)
        if sol.needs_suffix:
            suffix, _cost = walk_tree(pr.tree, pr.travel, sol.state)
            states = states + suffix[1:]
        return states

    def _prefix_compact(self, state: int, pid: int) -> list[int]:
        if self._prefix_index is None:
            # (state, 1-based occurrence) -> record row, built on demand.
            index: dict[tuple[int, int], int] = {}
            seen = [0] * self.profile.travel.n
            for row in range(self._core.store_count()):
                s = self._core.store_state(row)
                seen[s] += 1
                index[(s, seen[s])] = row
            self._prefix_index = index
        in_view = self.profile.in_view
        out = [state]
        ref = pid
        while True:
            row = self._prefix_index[(state, ref)]
            _s, par_ref, par_pid = self._core.store_entry(row)
            if par_ref == NO_ARC:
                out.reverse()
                return out
            state = int(in_view.to[par_ref])
            ref = par_pid
            out.append(state)

    def _prefix_conventional(self, slot: int) -> list[int]:
        out = []
        while True:
            state, pref, ppid = self._core.pool_record(slot)
            out.append(state)
            if pref == NO_ARC:
                out.reverse()
                return out
            slot = ppid
