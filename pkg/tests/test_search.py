"""Engine behavior: the worked example step by step, then trace invariants."""

import numpy as np
import pytest

from bobastar.graph import INF
from bobastar.heuristics import compute_all_heuristics
from bobastar.oracle import pareto_oracle
from bobastar.search import (
    SEED_REF,
    Engine,
    SharedBounds,
    Solution,
    SolutionList,
    last_solution_check,
    make_profile,
)
from bobastar.boba import solve

from conftest import (
    FIG2_ARCS,
    FIG2_FRONT,
    FIG2_N,
    FIG2_PATHS,
    FIG2_SOURCE,
    FIG2_TARGET,
    assert_staircase,
    make_graph,
)


def build_engine(g, src, dst, direction="fwd", order="12", **kw):
    """A single engine with open bounds and fresh heuristics."""
    hs = compute_all_heuristics(g, src, dst)
    assert hs is not None
    profile = make_profile(g, hs, src, dst, direction, order)
    return Engine(profile, SharedBounds(), **kw), hs


# The enhanced forward run on the worked example, event by event.  This
# sequence is load-bearing: it pins the pop order, every prune, the bound
# walk 6 -> 5 -> 3, and both sole-path skips at state 2.
FIG2_ENH_TRACE = [
    ("pop", 0, 0, 0, 4, 3),
    ("tune", 0, 0),
    ("record", 0, 1),
    ("bound", 6),
    ("solution", "early", 4, 6),
    ("expand", 0),
    ("prune_gen", 1, "secondary"),
    ("push", 2, 3, 4, 5, 5),
    ("push", 3, 3, 1, 6, 3),
    ("pop", 2, 3, 4, 5, 5),
    ("tune", 2, 3),
    ("record", 2, 1),
    ("bound", 5),
    ("solution", "early", 5, 5),
    ("skip_sole", 2),
    ("pop", 3, 3, 1, 6, 3),
    ("tune", 3, 3),
    ("record", 3, 1),
    ("expand", 3),
    ("push", 2, 5, 2, 7, 3),
    ("prune_gen", 4, "secondary"),
    ("pop", 2, 5, 2, 7, 3),
    ("record", 2, 2),
    ("bound", 3),
    ("solution", "early", 7, 3),
    ("skip_sole", 2),
]


class TestFig2Enhanced:
    @pytest.fixture(params=["heap", "bucket"])
    def run(self, fig2, request):
        trace = []
        eng, hs = build_engine(
            fig2, FIG2_SOURCE, FIG2_TARGET, queue=request.param, trace=trace
        )
        eng.run()
        return eng, hs, trace

    def test_golden_trace(self, run):
        _eng, _hs, trace = run
        assert trace == FIG2_ENH_TRACE

    def test_front_and_paths(self, run):
        eng, _hs, _trace = run
        sols = eng.solutions.items
        assert [s.oriented(0) for s in sols] == FIG2_FRONT
        assert [eng.reconstruct(s) for s in sols] == FIG2_PATHS

    def test_metrics(self, run):
        eng, _hs, _trace = run
        m = eng.metrics
        assert m.pops == 4
        assert m.expanded == 2
        assert m.generated == 4
        assert m.pruned_pop == 0
        assert m.pruned_gen == 2
        assert m.tune_writes == 3
        assert m.early_solutions == 3
        assert m.goal_solutions == 0
        assert m.seed_solutions == 0
        assert m.skipped_sole == 2
        assert m.replaced == 0
        assert m.peak_open == 2
        assert m.broke is False
        assert m.solutions == 3
        assert m.store_entries == 4

    def test_goal_state_was_never_queued(self, run):
        _eng, _hs, trace = run
        assert all(ev[1] != FIG2_TARGET for ev in trace if ev[0] == "push")

    def test_tuning_tightened_the_opposite_heuristic(self, run):
        # State 2 is first expanded at primary g 3, above its exact
        # distance 2; the cheaper prefix was already cut by the secondary
        # bound, so 3 is a valid lower bound for the partner engine.
        _eng, hs, _trace = run
        assert hs.h1p.tolist() == [0, 1, 3, 3, 4]

    def test_backtracking_records(self, run, fig2):
        eng, _hs, _trace = run
        store = eng.store
        assert store.parent_states(fig2.rev, 2) == [0, 3]
        assert [store.get(2, i)[1] for i in (1, 2)] == [1, 1]
        assert store.parent_states(fig2.rev, 3) == [0]


class TestFig2Baseline:
    @pytest.fixture
    def run(self, fig2):
        trace = []
        eng, _hs = build_engine(
            fig2, FIG2_SOURCE, FIG2_TARGET, enhanced=False, trace=trace
        )
        eng.run()
        return eng, trace

    def test_front_and_paths(self, run):
        eng, _trace = run
        sols = eng.solutions.items
        assert [s.oriented(0) for s in sols] == FIG2_FRONT
        assert [eng.reconstruct(s) for s in sols] == FIG2_PATHS

    def test_pop_sequence(self, run):
        _eng, trace = run
        assert [ev[1] for ev in trace if ev[0] == "pop"] == [0, 1, 2, 4, 2, 4, 3, 2, 4]

    def test_metrics(self, run):
        eng, _trace = run
        m = eng.metrics
        assert m.pops == 9
        assert m.expanded == 6
        assert m.generated == 9
        assert m.pruned_gen == 1
        assert m.goal_solutions == 3
        assert m.early_solutions == 0
        assert m.tune_writes == 0
        assert m.skipped_sole == 0
        assert m.peak_open == 3
        assert m.broke is False
        assert m.store_entries == 9

    def test_enhanced_expands_less(self, run, fig2):
        eng, _trace = run
        enh, _ = build_engine(fig2, FIG2_SOURCE, FIG2_TARGET)
        enh.run()
        assert enh.metrics.expanded < eng.metrics.expanded


def test_fig2_without_the_cheap_crossing(fig2):
    # Dropping the 3->2 arc removes the (7, 3) extreme.
    arcs = [a for a in FIG2_ARCS if a[:2] != (3, 2)]
    g = make_graph(FIG2_N, arcs)
    eng, _ = build_engine(g, FIG2_SOURCE, FIG2_TARGET)
    eng.run()
    assert [s.oriented(0) for s in eng.solutions.items] == [(4, 6), (5, 5)]
    assert pareto_oracle(g, FIG2_SOURCE, FIG2_TARGET) == [(4, 6), (5, 5)]


def test_single_arc_graph_solves_without_expanding():
    g = make_graph(2, [(0, 1, 4, 3)])
    eng, _ = build_engine(g, 0, 1)
    eng.run()
    sols = eng.solutions.items
    assert [s.oriented(0) for s in sols] == [(4, 3)]
    assert eng.reconstruct(sols[0]) == [0, 1]
    assert eng.metrics.expanded == 0
    assert eng.metrics.skipped_sole == 1


def test_unreachable_origin_finishes_immediately(fig2):
    hs = compute_all_heuristics(fig2, FIG2_SOURCE, FIG2_TARGET)
    profile = make_profile(fig2, hs, FIG2_SOURCE, FIG2_TARGET, "fwd", "12")
    profile.hp = np.full(fig2.n, INF, dtype=np.int64)
    eng = Engine(profile, SharedBounds())
    assert eng.finished
    assert eng.step() is False
    assert eng.metrics.generated == 0
    assert len(eng.solutions) == 0


class TestSharedBounds:
    def test_defaults_open(self):
        b = SharedBounds()
        assert b.read(0) == INF and b.read(1) == INF

    def test_lower_is_monotone(self):
        b = SharedBounds(10, 20)
        b.lower(0, 12)
        assert b.read(0) == 10
        b.lower(0, 7)
        assert b.read(0) == 7
        b.lower(1, 20)
        assert b.read(1) == 20


class TestLastSolutionCheck:
    def sol(self, cp, cq):
        return Solution(cp, cq, 0, SEED_REF, False)

    def test_empty_list(self):
        assert last_solution_check([], 5) is False

    def test_tie_drops_the_older_entry(self):
        items = [self.sol(3, 9), self.sol(5, 4)]
        assert last_solution_check(items, 5) is True
        assert [(s.cp, s.cq) for s in items] == [(3, 9)]

    def test_strictly_larger_keeps_everything(self):
        items = [self.sol(3, 9)]
        assert last_solution_check(items, 4) is False
        assert len(items) == 1

    def test_append_checked_counts_replacements(self):
        sl = SolutionList()
        sl.append_checked(self.sol(5, 9))
        sl.append_checked(self.sol(5, 4))
        assert sl.replaced == 1
        assert [(s.cp, s.cq) for s in sl.items] == [(5, 4)]


# Two equal-c1 paths where the bucket's LIFO order surfaces the worse
# secondary first, forcing the in-place replacement of a goal solution.
REPLACEMENT_ARCS = [(0, 1, 2, 2), (0, 2, 1, 1), (2, 3, 4, 8), (1, 3, 3, 2)]


def test_goal_tie_replacement_under_bucket_order():
    g = make_graph(6, REPLACEMENT_ARCS)
    eng, _ = build_engine(g, 0, 3, enhanced=False, queue="bucket")
    eng.run()
    assert [s.oriented(0) for s in eng.solutions.items] == [(5, 4)]
    assert eng.metrics.replaced == 1
    assert eng.metrics.goal_solutions == 2
    assert pareto_oracle(g, 0, 3) == [(5, 4)]


def star_graph():
    """Six non-dominated spokes behind one expansion."""
    arcs = [(0, i, i, 2 * (6 - i)) for i in range(1, 7)]
    arcs += [(i, 7, 0, 0) for i in range(1, 7)]
    return make_graph(8, arcs)


def test_terminal_star_emits_many_solutions_per_expansion():
    g = star_graph()
    eng, _ = build_engine(g, 0, 7)
    eng.run()
    front = [s.oriented(0) for s in eng.solutions.items]
    assert front == [(1, 10), (2, 8), (3, 6), (4, 4), (5, 2), (6, 0)]
    assert front == pareto_oracle(g, 0, 7)
    m = eng.metrics
    assert m.expanded == 1
    assert m.solutions == 6
    # A terminal-heavy instance outruns any solutions-vs-expansions cap;
    # the sound ceiling is one solution per stored record plus a seed.
    assert m.solutions > m.expanded + 2
    assert m.solutions <= m.store_entries + 1
    assert_staircase(front)


def simulate_uni_trace(trace, target, enhanced):
    """Replay a single-engine trace, checking every decision point."""
    gmin: dict[int, int] = {}
    bound = INF
    last_fp = -1
    cur = None
    for ev in trace:
        kind = ev[0]
        if kind == "pop":
            _, state, gp, gq, fp, fq = ev
            assert fp >= last_fp, "primary f went backwards"
            last_fp = fp
            cur = (state, gp, gq, fp, fq)
        elif kind == "prune_pop":
            state, _gp, gq, _fp, fq = cur
            assert gq >= gmin.get(state, INF) or fq >= bound
        elif kind == "record":
            state, _gp, gq, _fp, fq = cur
            assert gq < gmin.get(state, INF)
            assert fq < bound
            gmin[state] = gq
        elif kind == "bound":
            assert ev[1] < bound
            bound = ev[1]
            gmin[target] = ev[1]
        elif kind == "push":
            _, t, _ngp, ngq, nfp, nfq = ev
            assert ngq < gmin.get(t, INF)
            assert nfq < bound
            assert nfp >= cur[3], "child primary f below its parent"
        elif kind == "break":
            assert enhanced
    return gmin, bound


class TestTraceInvariants:
    @pytest.mark.parametrize("direction", ["fwd", "bwd"])
    @pytest.mark.parametrize("queue", ["heap", "bucket"])
    def test_corpus_traces_replay_cleanly(self, corpus_small, direction, queue):
        for g, src, dst in corpus_small[:15]:
            trace = []
            res = solve(
                g, src, dst, alg="boa-enh", backend="pure",
                direction=direction, queue=queue, trace=trace,
            )
            if not res.metrics:
                continue
            goal = dst if direction == "fwd" else src
            simulate_uni_trace(trace, goal, enhanced=True)

    def test_popped_costs_were_frozen_at_generation(self, corpus_small):
        # Every pop after the first replays exactly one earlier push.
        for g, src, dst in corpus_small[:15]:
            trace = []
            res = solve(g, src, dst, alg="boa", backend="pure", trace=trace)
            if not res.metrics:
                continue
            pushes = [ev[1:] for ev in trace if ev[0] == "push"]
            pops = [ev[1:] for ev in trace if ev[0] == "pop"]
            for item in pops[1:]:
                pushes.remove(item)  # raises ValueError on a mismatch


UNI_COUNTER_FIELDS = (
    "pops", "expanded", "generated", "pruned_pop", "pruned_gen",
    "goal_solutions", "early_solutions", "seed_solutions", "replaced",
    "skipped_sole", "peak_open", "broke", "solutions", "peak_live",
    "pool_reuses", "pool_size", "store_entries",
)


def test_tuning_is_inert_without_a_partner(corpus_small):
    # Single-engine runs write the tuning array but nothing reads it.
    for g, src, dst in corpus_small[:10]:
        for order in ("12", "21"):
            on = solve(g, src, dst, alg="boa-enh", order=order, tuning=True)
            off = solve(g, src, dst, alg="boa-enh", order=order, tuning=False)
            assert on.front == off.front
            assert on.paths == off.paths
            if not on.metrics:
                continue
            for f in UNI_COUNTER_FIELDS:
                assert getattr(on.metrics[0], f) == getattr(off.metrics[0], f), f
    probe = solve(*_first_nonempty(corpus_small), alg="boa-enh", tuning=True)
    assert probe.metrics[0].tune_writes > 0


def _first_nonempty(corpus):
    for g, src, dst in corpus:
        if pareto_oracle(g, src, dst):
            return g, src, dst
    raise AssertionError("corpus has no reachable instance")


def test_paired_seed_break_on_single_arc():
    g = make_graph(2, [(0, 1, 4, 3)])
    res = solve(g, 0, 1, alg="boba")
    assert res.front == [(4, 3)]
    assert res.paths == [[0, 1]]
    for m in res.metrics:
        assert m.seed_solutions == 1
        assert m.broke is True
        assert m.expanded == 0
        assert m.generated == 1
