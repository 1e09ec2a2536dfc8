"""Compact backtracking storage.

Search nodes are transient: once popped, a surviving node leaves behind only
a per-state record (incoming-arc position, parent record id) and its full
record is recycled for the next generated node. Solution paths are rebuilt
by walking these per-state records; incoming-arc positions index the
opposite adjacency view, whose ``to`` field recovers the parent state.

The conventional scheme (every node retained, parents chained by record
slot) is kept as a switch purely for memory-accounting comparisons.
"""

from __future__ import annotations

from .graph import AdjView

NO_ARC = -1  # incoming-arc sentinel for a search origin


class PathStore:
    """Per-state growable arrays of (par_ref, par_path_id) pairs.

    Path ids are 1-based per state; id 0 is reserved for "no record"
    (used by seeded solutions that consist of a tree walk only).
    """

    def __init__(self, n: int):
        self._refs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self.entries = 0

    def record(self, state: int, par_ref: int, par_path_id: int) -> int:
        """Append a record for state and return its new 1-based id."""
        bucket = self._refs[state]
        bucket.append((par_ref, par_path_id))
        self.entries += 1
        return len(bucket)

    def get(self, state: int, path_id: int) -> tuple[int, int]:
        bucket = self._refs[state]
        assert 1 <= path_id <= len(bucket), (
            f"dangling path id {path_id} at state {state} (have {len(bucket)})"
        )
        return bucket[path_id - 1]

    def count(self, state: int) -> int:
        return len(self._refs[state])

    def parent_states(self, in_view: AdjView, state: int) -> list[int]:
        """Parent state per record (NO_ARC for an origin record); test aid."""
        out = []
        for ref, _pid in self._refs[state]:
            out.append(NO_ARC if ref == NO_ARC else int(in_view.to[ref]))
        return out


class NodePool:
    """Slot-addressed node records with an optional freelist.

    Fields live in parallel lists; acquire() prefers a recycled slot. With
    recycle=False nothing is ever freed and the slots double as the
    conventional backtracking chain (ppid then holds the parent slot).
    """

    def __init__(self, recycle: bool = True):
        self.recycle = recycle
        self.state: list[int] = []
        self.gp: list[int] = []
        self.gq: list[int] = []
        self.fp: list[int] = []
        self.fq: list[int] = []
        self.pref: list[int] = []
        self.ppid: list[int] = []
        self._free: list[int] = []
        self.reuses = 0
        self.live = 0
        self.peak_live = 0

    def acquire(self, state: int, gp: int, gq: int, fp: int, fq: int,
                pref: int, ppid: int) -> int:
        self.live += 1
        if self.live > self.peak_live:
            self.peak_live = self.live
        if self._free:
            slot = self._free.pop()
            self.reuses += 1
            self.state[slot] = state
            self.gp[slot] = gp
            self.gq[slot] = gq
            self.fp[slot] = fp
            self.fq[slot] = fq
            self.pref[slot] = pref
            self.ppid[slot] = ppid
            return slot
        slot = len(self.state)
        self.state.append(state)
        self.gp.append(gp)
        self.gq.append(gq)
        self.fp.append(fp)
        self.fq.append(fq)
        self.pref.append(pref)
        self.ppid.append(ppid)
        return slot

    def release(self, slot: int) -> None:
        # Without recycling every record is retained for backtracking, so
        # it stays live and peak_live ends up equal to the acquire count.
        if self.recycle:
            self.live -= 1
            self._free.append(slot)

    def slot_parent(self, slot: int) -> tuple[int, int, int]:
        """(state, par_ref, parent_slot) for conventional-mode walking."""
        return self.state[slot], self.pref[slot], self.ppid[slot]


def prefix_path(store: PathStore, in_view: AdjView, state: int, path_id: int) -> list[int]:
    """States from the search origin to `state`, following stored records."""
    path = [state]
    s, pid = state, path_id
    while True:
        ref, ppid = store.get(s, pid)
        if ref == NO_ARC:
            break
        s = int(in_view.to[ref])
        pid = ppid
        path.append(s)
    path.reverse()
    return path


def prefix_path_conventional(pool, slot: int) -> list[int]:
    """Conventional-mode prefix: walk retained node slots instead of records."""
    path = []
    while True:
        state, ref, parent = pool.slot_parent(slot)
        path.append(int(state))
        if ref == NO_ARC:
            break
        slot = parent
    path.reverse()
    return path
