"""Monotone frontier queues for best-first search.

Two interchangeable modes:

* ``heap``   -- binary heap ordered lexicographically by (primary, secondary);
                ties beyond that fall back to insertion order, which callers
                must not rely on.
* ``bucket`` -- fixed-size array of buckets indexed by primary key only.
                Pops return *a* minimal-primary element with no secondary
                ordering; the cursor never moves backwards, which is sound
                only because searches push keys that never fall below the
                last popped primary.
"""

from __future__ import annotations

import heapq
from itertools import count

# Bucket arrays beyond this are almost certainly a misconfiguration
# (uni-directional run on a continental graph); heap mode has no such limit.
MAX_BUCKET_SPAN = 1 << 26


class FrontierQueue:
    """Open list keyed by (primary, secondary) integer pairs."""

    def __init__(self, mode: str, lo: int = 0, hi: int = 0):
        if mode not in ("bucket", "heap"):
            raise ValueError(f"unknown frontier mode {mode!r}")
        self.mode = mode
        self._size = 0
        if mode == "bucket":
            if hi < lo:
                raise ValueError(f"empty bucket range [{lo}, {hi}]")
            span = hi - lo + 1
            if span > MAX_BUCKET_SPAN:
                raise ValueError(
                    f"bucket span {span} exceeds {MAX_BUCKET_SPAN}; use the heap frontier"
                )
            self._lo = lo
            self._hi = hi
            # Buckets materialize on first use; wide spans stay cheap.
            self._buckets: list[list[int] | None] = [None] * span
            self._cursor = 0
        else:
            self._heap: list[tuple[int, int, int, int]] = []
            self._seq = count()

    def __len__(self) -> int:
        return self._size

    def push(self, primary: int, secondary: int, ref: int) -> None:
        if self.mode == "heap":
            heapq.heappush(self._heap, (primary, secondary, next(self._seq), ref))
        else:
            idx = primary - self._lo
            if idx < 0 or primary > self._hi:
                raise ValueError(
                    f"bucket key {primary} outside [{self._lo}, {self._hi}]"
                )
            if idx < self._cursor:
                raise ValueError(
                    f"non-monotone bucket push: key {primary} below cursor"
                )
            bucket = self._buckets[idx]
            if bucket is None:
                self._buckets[idx] = [ref]
            else:
                bucket.append(ref)
        self._size += 1

    def pop_min(self) -> int | None:
        """Smallest element's ref, or None when exhausted."""
        if self._size == 0:
            return None
        self._size -= 1
        if self.mode == "heap":
            return heapq.heappop(self._heap)[3]
        buckets = self._buckets
        cur = self._cursor
        while not buckets[cur]:
            cur += 1
        self._cursor = cur
        return buckets[cur].pop()

    def peek_key(self) -> int | None:
        """Primary key of the next pop, or None when empty."""
        if self._size == 0:
            return None
        if self.mode == "heap":
            return self._heap[0][0]
        cur = self._cursor
        while not self._buckets[cur]:
            cur += 1
        return cur + self._lo
