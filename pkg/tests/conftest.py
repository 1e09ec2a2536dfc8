"""Shared fixtures: the 5-state worked example and a seeded random corpus.

The corpus is deliberately nasty for its size: zero-cost components,
parallel arcs, self-loops, unreachable targets. Every correctness test
compares against the brute-force oracle, never against the engines.
"""

from __future__ import annotations

import random

import pytest

from bobastar.graph import BiGraph

# The canonical worked example: ids 0..4 = s_s, s_1, s_2, s_3, s_g.
# Oracle front source->target: [(4, 6), (5, 5), (7, 3)].
FIG2_ARCS = [
    (0, 1, 1, 3),
    (1, 2, 1, 2),
    (0, 2, 3, 4),
    (0, 3, 3, 1),
    (3, 2, 2, 1),
    (2, 4, 2, 1),
    (3, 4, 3, 4),
]
FIG2_N = 5
FIG2_SOURCE = 0
FIG2_TARGET = 4
FIG2_FRONT = [(4, 6), (5, 5), (7, 3)]
FIG2_PATHS = [[0, 1, 2, 4], [0, 2, 4], [0, 3, 2, 4]]

CORPUS_SEED = 20260818
CORPUS_SIZE = 200


def make_graph(n: int, arcs) -> BiGraph:
    return BiGraph.from_arcs(n, arcs)


def random_instance(rng: random.Random, max_n: int = 50, max_m: int = 200,
                    max_w: int = 10):
    """One (graph, source, target) with distinct endpoints."""
    n = rng.randint(2, max_n)
    m = rng.randint(1, max_m)
    arcs = [
        (rng.randrange(n), rng.randrange(n), rng.randint(0, max_w), rng.randint(0, max_w))
        for _ in range(m)
    ]
    src = rng.randrange(n)
    dst = rng.randrange(n - 1)
    if dst >= src:
        dst += 1
    return make_graph(n, arcs), src, dst


def build_corpus(count: int = CORPUS_SIZE, seed: int = CORPUS_SEED, **kw):
    rng = random.Random(seed)
    return [random_instance(rng, **kw) for _ in range(count)]


@pytest.fixture(scope="session")
def corpus():
    """The acceptance corpus: 200 seeded instances, n<=50, m<=200, w<=10."""
    return build_corpus()


@pytest.fixture(scope="session")
def corpus_small(corpus):
    """A cheap slice for per-module property tests."""
    return corpus[:40]


@pytest.fixture
def fig2() -> BiGraph:
    return make_graph(FIG2_N, FIG2_ARCS)


def path_cost_options(g: BiGraph, states) -> set[tuple[int, int]]:
    """Every (c1, c2) total realizable by the given state sequence.

    Parallel arcs make a state sequence cost-ambiguous, so a reported
    cost is correct iff some per-hop arc choice sums to it. Empty set
    means the sequence is not even a walk.
    """
    options = {(0, 0)}
    view = g.fwd
    for u, v in zip(states, states[1:]):
        hops = [
            (int(view.c1[k]), int(view.c2[k]))
            for k in view.out_arcs(u)
            if int(view.to[k]) == v
        ]
        if not hops:
            return set()
        options = {(a + w1, b + w2) for a, b in options for w1, w2 in hops}
    return options


def assert_path_realizes(g: BiGraph, states, cost, source=None, target=None):
    if source is not None:
        assert states[0] == source
    if target is not None:
        assert states[-1] == target
    assert tuple(cost) in path_cost_options(g, states), (
        f"path {states} cannot sum to {cost}"
    )


def pareto_filter(costs) -> list[tuple[int, int]]:
    """Reference dominance filter: strictly increasing c1, decreasing c2."""
    out: list[tuple[int, int]] = []
    for c1, c2 in sorted(set(costs)):
        if not out or c2 < out[-1][1]:
            out.append((c1, c2))
    return out


def assert_staircase(front):
    for (a1, a2), (b1, b2) in zip(front, front[1:]):
        assert a1 < b1 and a2 > b2, f"front not a staircase: {front}"
