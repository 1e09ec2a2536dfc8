"""Bi-objective graphs: DIMACS .gr parsing and CSR adjacency views.

Two .gr files with identical topology supply the two arc-cost objectives.
States are 0-based internally; DIMACS I/O is 1-based.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

# Infinity sentinel: large enough that no real path cost reaches it
# (<= 2^25 states x 32-bit weights < 2^57), small enough that the sum of
# two sentinels still fits in int64. Additions must saturate at INF.
INF = 1 << 62

_MAX_WEIGHT = (1 << 32) - 1


def sat_add(a: int, b: int) -> int:
    """Add two costs, saturating at the INF sentinel."""
    s = a + b
    return INF if s >= INF else s


def weakly_dominates(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] <= b[0] and a[1] <= b[1]


def dominates(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] <= b[0] and a[1] <= b[1] and a != b


class DimacsError(ValueError):
    """Malformed .gr input; message carries the offending line number."""


class TopologyMismatchError(ValueError):
    """The two objective files disagree on states or arcs."""


@dataclass
class ParsedGraph:
    """Raw arcs from one .gr file, endpoints already 0-based."""

    n: int
    m: int
    src: np.ndarray
    dst: np.ndarray
    w: np.ndarray

    def arcs(self) -> list[tuple[int, int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist(), self.w.tolist()))


def parse_dimacs_gr(source: str | Path | TextIO) -> ParsedGraph:
    """Parse a 9th DIMACS challenge .gr file.

    Raises DimacsError on structural problems (unknown line kind, missing or
    duplicate problem line, endpoint/weight out of range, arc count mismatch).
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="ascii") as f:
            return parse_dimacs_gr(f)

    n = m = -1
    src: list[int] = []
    dst: list[int] = []
    wgt: list[int] = []
    for lineno, line in enumerate(source, start=1):
        tokens = line.split()
        if not tokens:
            continue
        kind = tokens[0]
        if kind == "c":
            continue
        if kind == "p":
            if n >= 0:
                raise DimacsError(f"line {lineno}: duplicate problem line")
            if len(tokens) != 4 or tokens[1] != "sp":
                raise DimacsError(f"line {lineno}: expected 'p sp <n> <m>'")
            try:
                n, m = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: non-integer problem sizes") from None
            if n < 1 or m < 0:
                raise DimacsError(f"line {lineno}: bad sizes n={n} m={m}")
        elif kind == "a":
            if n < 0:
                raise DimacsError(f"line {lineno}: arc before problem line")
            if len(tokens) != 4:
                raise DimacsError(f"line {lineno}: expected 'a <from> <to> <weight>'")
            try:
                u, v, w = int(tokens[1]), int(tokens[2]), int(tokens[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: non-integer arc fields") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(f"line {lineno}: endpoint out of range 1..{n}")
            if not (0 <= w <= _MAX_WEIGHT):
                raise DimacsError(f"line {lineno}: weight {w} outside 0..{_MAX_WEIGHT}")
            src.append(u - 1)
            dst.append(v - 1)
            wgt.append(w)
        else:
            raise DimacsError(f"line {lineno}: unknown line kind {kind!r}")
    if n < 0:
        raise DimacsError("missing problem line")
    if len(src) != m:
        raise DimacsError(f"arc count mismatch: problem line says {m}, found {len(src)}")
    return ParsedGraph(
        n=n,
        m=m,
        src=np.asarray(src, dtype=np.int64),
        dst=np.asarray(dst, dtype=np.int64),
        w=np.asarray(wgt, dtype=np.int64),
    )


def write_dimacs_gr(
    target: str | Path | TextIO,
    n: int,
    arcs: Iterable[tuple[int, int, int]],
    comment: str | None = None,
) -> None:
    """Write 0-based (u, v, w) arcs back out as 1-based DIMACS text."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="ascii") as f:
            write_dimacs_gr(f, n, arcs, comment)
            return
    arcs = list(arcs)
    if comment:
        target.write(f"c {comment}\n")
    target.write(f"p sp {n} {len(arcs)}\n")
    for u, v, w in arcs:
        target.write(f"a {u + 1} {v + 1} {w}\n")


@dataclass
class AdjView:
    """CSR adjacency for one travel direction.

    Slot k lists an arc (u -> to[k]) with costs (c1[k], c2[k]); u is implied
    by head. opp[k] is the slot of the same underlying arc in the opposite
    view, i.e. the incoming-arc position at to[k] that backtracking records.
    """

    n: int
    head: np.ndarray
    to: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    opp: np.ndarray

    def out_arcs(self, u: int) -> range:
        return range(int(self.head[u]), int(self.head[u + 1]))


@dataclass
class BiGraph:
    """Directed graph with two nonnegative integer costs per arc."""

    n: int
    m: int
    fwd: AdjView
    rev: AdjView

    def reversed(self) -> "BiGraph":
        """Arc-reversed graph; shares the underlying arrays. Involution."""
        return BiGraph(n=self.n, m=self.m, fwd=self.rev, rev=self.fwd)

    def arcs(self) -> list[tuple[int, int, int, int]]:
        """(u, v, c1, c2) for every kept arc, grouped by u."""
        out = []
        for u in range(self.n):
            for k in self.fwd.out_arcs(u):
                out.append((u, int(self.fwd.to[k]), int(self.fwd.c1[k]), int(self.fwd.c2[k])))
        return out

    @staticmethod
    def from_arcs(n: int, arcs: Iterable[tuple[int, int, int, int]]) -> "BiGraph":
        arcs = list(arcs)
        u = np.asarray([a[0] for a in arcs], dtype=np.int64)
        v = np.asarray([a[1] for a in arcs], dtype=np.int64)
        c1 = np.asarray([a[2] for a in arcs], dtype=np.int64)
        c2 = np.asarray([a[3] for a in arcs], dtype=np.int64)
        return _assemble(n, u, v, c1, c2)


def build_bigraph(first: ParsedGraph, second: ParsedGraph) -> BiGraph:
    """Combine two single-objective parses over one topology.

    The arc sequences must agree exactly (same order, same endpoints);
    self-loops are dropped since they can never lie on a shortest path.
    """
    if first.n != second.n:
        raise TopologyMismatchError(f"state counts differ: {first.n} vs {second.n}")
    if first.m != second.m:
        raise TopologyMismatchError(f"arc counts differ: {first.m} vs {second.m}")
    if not (np.array_equal(first.src, second.src) and np.array_equal(first.dst, second.dst)):
        k = int(np.argmax((first.src != second.src) | (first.dst != second.dst)))
        raise TopologyMismatchError(f"arc {k + 1} differs between the two files")
    return _assemble(first.n, first.src, first.dst, first.w, second.w)


def _assemble(n: int, u: np.ndarray, v: np.ndarray, c1: np.ndarray, c2: np.ndarray) -> BiGraph:
    keep = u != v
    u, v, c1, c2 = u[keep], v[keep], c1[keep], c2[keep]
    m = int(u.size)

    # Stable sorts keep parallel arcs in input order within each bucket.
    order_f = np.argsort(u, kind="stable")
    order_r = np.argsort(v, kind="stable")
    inv_f = np.empty(m, dtype=np.int64)
    inv_r = np.empty(m, dtype=np.int64)
    inv_f[order_f] = np.arange(m, dtype=np.int64)
    inv_r[order_r] = np.arange(m, dtype=np.int64)

    head_f = np.zeros(n + 1, dtype=np.int64)
    head_r = np.zeros(n + 1, dtype=np.int64)
    head_f[1:] = np.cumsum(np.bincount(u, minlength=n))
    head_r[1:] = np.cumsum(np.bincount(v, minlength=n))

    fwd = AdjView(n=n, head=head_f, to=v[order_f].copy(), c1=c1[order_f].copy(),
                  c2=c2[order_f].copy(), opp=inv_r[order_f].copy())
    rev = AdjView(n=n, head=head_r, to=u[order_r].copy(), c1=c1[order_r].copy(),
                  c2=c2[order_r].copy(), opp=inv_f[order_r].copy())
    return BiGraph(n=n, m=m, fwd=fwd, rev=rev)
