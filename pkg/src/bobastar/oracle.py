"""Brute-force Pareto reference.

A label-correcting fixpoint with per-state bags of non-dominated labels.
Deliberately naive and structurally unrelated to the search engines: no
heuristics, no ordering tricks, no shared code paths. Intended for small
instances where an exact, slow answer is worth more than speed.
"""

from __future__ import annotations

from collections import deque

from .graph import BiGraph


class _Label:
    __slots__ = ("c1", "c2", "state", "parent")

    def __init__(self, c1: int, c2: int, state: int, parent: "_Label | None"):
        self.c1 = c1
        self.c2 = c2
        self.state = state
        self.parent = parent

    def path(self) -> list[int]:
        out = []
        lab: _Label | None = self
        while lab is not None:
            out.append(lab.state)
            lab = lab.parent
        out.reverse()
        return out


def _insert(bag: list[_Label], cand: _Label) -> bool:
    """Keep bag non-dominated and cost-unique; True if cand was added."""
    for lab in bag:
        if lab.c1 <= cand.c1 and lab.c2 <= cand.c2:
            return False  # weakly dominated (covers exact duplicates)
    bag[:] = [lab for lab in bag
              if not (cand.c1 <= lab.c1 and cand.c2 <= lab.c2)]
    bag.append(cand)
    return True


def _fixpoint(g: BiGraph, source: int) -> list[list[_Label]]:
    bags: list[list[_Label]] = [[] for _ in range(g.n)]
    bags[source].append(_Label(0, 0, source, None))
    queued = [False] * g.n
    queue: deque[int] = deque([source])
    queued[source] = True
    view = g.fwd
    while queue:
        u = queue.popleft()
        queued[u] = False
        # Relax every label along every out-arc; rejected re-inserts are
        # the price of staying simple.
        for k in view.out_arcs(u):
            v = int(view.to[k])
            w1 = int(view.c1[k])
            w2 = int(view.c2[k])
            changed = False
            for lab in list(bags[u]):
                if _insert(bags[v], _Label(lab.c1 + w1, lab.c2 + w2, v, lab)):
                    changed = True
            if changed and not queued[v]:
                queue.append(v)
                queued[v] = True
    return bags


def _sorted_bag(bags: list[list[_Label]], target: int) -> list[_Label]:
    return sorted(bags[target], key=lambda lab: (lab.c1, lab.c2))


def pareto_oracle(g: BiGraph, source: int, target: int) -> list[tuple[int, int]]:
    """All non-dominated (c1, c2) source-target path costs, c1 ascending."""
    return [(lab.c1, lab.c2) for lab in _sorted_bag(_fixpoint(g, source), target)]


def pareto_oracle_with_paths(
    g: BiGraph, source: int, target: int
) -> list[tuple[tuple[int, int], list[int]]]:
    """Like pareto_oracle, but each cost pair carries a witness path."""
    return [((lab.c1, lab.c2), lab.path())
            for lab in _sorted_bag(_fixpoint(g, source), target)]
