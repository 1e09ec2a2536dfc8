# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels: the lexicographic one-to-all search and the engine core.

Semantics mirror heuristics.lex_search_py and search.Engine exactly, pop
for pop; single-worker runs must produce identical fronts, paths, and
counters.  The heap comparator and the bucket LIFO discipline are the
contract here, not an implementation detail.  Tracing is not supported;
the pure engine covers that.

The paired mode shares two bound cells and the tuning arrays across
threads.  Each cell has exactly one writer, so the cells get ordered
atomic loads/stores and nothing needs a lock; a stale partner read only
delays pruning.
"""

from libc.stdint cimport int64_t, uint8_t
from libc.stdlib cimport free, malloc, realloc


cdef extern from *:
    """
    #include <stdint.h>
    static inline int64_t bob_cell_load(const int64_t *p) {
        return __atomic_load_n(p, __ATOMIC_ACQUIRE);
    }
    static inline void bob_cell_store(int64_t *p, int64_t v) {
        __atomic_store_n(p, v, __ATOMIC_RELEASE);
    }
    """
    int64_t bob_cell_load(const int64_t *p) noexcept nogil
    void bob_cell_store(int64_t *p, int64_t v) noexcept nogil

cdef int64_t INF = <int64_t>1 << 62
cdef int64_t NO_ARC = -1
cdef int64_t SEED_REF = -1


cdef inline int64_t *grow(int64_t *buf, Py_ssize_t new_cap) except NULL nogil:
    cdef int64_t *out = <int64_t *> realloc(buf, new_cap * sizeof(int64_t))
    if out == NULL:
        with gil:
            raise MemoryError()
    return out


# ---------------------------------------------------------------------------
# Lexicographic one-to-all search.
#
# The heap entries carry five int64 fields compared lexicographically:
# (guided primary, secondary, state, raw primary, parent arc).  The last
# three only break ties, but they decide which parent a tie settles with,
# and the parent trees must match the pure backend's.

cdef struct LexHeap:
    int64_t *f
    int64_t *gs
    int64_t *u
    int64_t *gp
    int64_t *pref
    Py_ssize_t size
    Py_ssize_t cap


cdef inline bint lex_less(LexHeap *h, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    if h.f[a] != h.f[b]:
        return h.f[a] < h.f[b]
    if h.gs[a] != h.gs[b]:
        return h.gs[a] < h.gs[b]
    if h.u[a] != h.u[b]:
        return h.u[a] < h.u[b]
    if h.gp[a] != h.gp[b]:
        return h.gp[a] < h.gp[b]
    return h.pref[a] < h.pref[b]


cdef inline void lex_swap(LexHeap *h, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    h.f[a], h.f[b] = h.f[b], h.f[a]
    h.gs[a], h.gs[b] = h.gs[b], h.gs[a]
    h.u[a], h.u[b] = h.u[b], h.u[a]
    h.gp[a], h.gp[b] = h.gp[b], h.gp[a]
    h.pref[a], h.pref[b] = h.pref[b], h.pref[a]


cdef int lex_push(LexHeap *h, int64_t f, int64_t gs, int64_t u,
                  int64_t gp, int64_t pref) except -1 nogil:
    cdef Py_ssize_t i, parent
    if h.size == h.cap:
        h.cap = 64 if h.cap == 0 else h.cap * 2
        h.f = grow(h.f, h.cap)
        h.gs = grow(h.gs, h.cap)
        h.u = grow(h.u, h.cap)
        h.gp = grow(h.gp, h.cap)
        h.pref = grow(h.pref, h.cap)
    i = h.size
    h.f[i] = f
    h.gs[i] = gs
    h.u[i] = u
    h.gp[i] = gp
    h.pref[i] = pref
    h.size += 1
    while i > 0:
        parent = (i - 1) >> 1
        if lex_less(h, i, parent):
            lex_swap(h, i, parent)
            i = parent
        else:
            break
    return 0


cdef void lex_pop(LexHeap *h) noexcept nogil:
    # Caller reads slot 0 first; this removes it.
    cdef Py_ssize_t i = 0, child
    h.size -= 1
    if h.size == 0:
        return
    lex_swap(h, 0, h.size)
    while True:
        child = 2 * i + 1
        if child >= h.size:
            break
        if child + 1 < h.size and lex_less(h, child + 1, child):
            child += 1
        if lex_less(h, child, i):
            lex_swap(h, i, child)
            i = child
        else:
            break


def lex_search_fill(
    int64_t[::1] head, int64_t[::1] to,
    int64_t[::1] c1, int64_t[::1] c2, int64_t[::1] opp,
    int64_t origin, int64_t primary,
    int64_t[::1] guide, int64_t bound, uint8_t[::1] mask,
    int64_t[::1] dp, int64_t[::1] ds, int64_t[::1] par, uint8_t[::1] reached,
):
    """Fill dp/ds/par/reached in place; the caller preallocates them.

    guide must be all zeros when unused and bound INF when unbounded;
    the Python shim normalizes both.
    """
    cdef int64_t[::1] wp = c1 if primary == 0 else c2
    cdef int64_t[::1] ws = c2 if primary == 0 else c1
    cdef LexHeap h
    cdef int64_t f, gs, u, gp, pref, v, ngp, nf
    cdef Py_ssize_t k

    if mask[origin]:
        return

    h.f = NULL
    h.gs = NULL
    h.u = NULL
    h.gp = NULL
    h.pref = NULL
    h.size = 0
    h.cap = 0
    try:
        with nogil:
            lex_push(&h, guide[origin], 0, origin, 0, NO_ARC)
            while h.size > 0:
                f = h.f[0]
                gs = h.gs[0]
                u = h.u[0]
                gp = h.gp[0]
                pref = h.pref[0]
                lex_pop(&h)
                if reached[u]:
                    continue
                if f > bound:
                    break
                reached[u] = 1
                dp[u] = gp
                ds[u] = gs
                par[u] = pref
                for k in range(head[u], head[u + 1]):
                    v = to[k]
                    if reached[v] or mask[v]:
                        continue
                    ngp = gp + wp[k]
                    nf = ngp + guide[v]
                    if nf > bound:
                        continue
                    lex_push(&h, nf, gs + ws[k], v, ngp, opp[k])
    finally:
        free(h.f)
        free(h.gs)
        free(h.u)
        free(h.gp)
        free(h.pref)


# ---------------------------------------------------------------------------
# Engine core.

cdef class EngineCore:
    """C-side state for one engine run; see search.Engine for semantics.

    Owns the node pool, backtracking store, frontier queue, and solution
    list as growable C arrays.  The wrapping CompiledEngine mirrors
    everything back into the usual Python structures after the run.
    """

    cdef int64_t[::1] head
    cdef int64_t[::1] to
    cdef int64_t[::1] wp
    cdef int64_t[::1] wq
    cdef int64_t[::1] opp
    cdef int64_t[::1] hp
    cdef int64_t[::1] hq
    cdef int64_t[::1] up
    cdef int64_t[::1] uq
    cdef int64_t[::1] tune
    cdef int64_t[::1] cells
    cdef bint tuning

    cdef int64_t origin, target
    cdef int own, partner
    cdef bint enhanced, compact, use_bucket
    cdef int64_t lo, hi
    cdef bint _finished

    # node pool (parallel arrays indexed by slot)
    cdef int64_t *pst
    cdef int64_t *pgp
    cdef int64_t *pgq
    cdef int64_t *pfp
    cdef int64_t *pfq
    cdef int64_t *ppref
    cdef int64_t *pppid
    cdef int64_t *pfree
    cdef Py_ssize_t psize, pcap, nfree
    cdef int64_t live, peak_live, reuses

    # backtracking store (flat rows in record order)
    cdef int64_t *sst
    cdef int64_t *sref
    cdef int64_t *spid
    cdef Py_ssize_t scount, scap
    cdef int64_t *soccur  # per-state record count, 1-based ids

    # frontier: binary heap on (fp, fq, seq) or LIFO buckets on fp
    cdef int64_t *qfp
    cdef int64_t *qfq
    cdef int64_t *qseq
    cdef int64_t *qref
    cdef Py_ssize_t qsize, qcap
    cdef int64_t seq
    cdef int64_t *bhead   # top slot per bucket, NO_ARC when empty
    cdef int64_t *blink   # next slot down, indexed like the pool
    cdef Py_ssize_t span, cursor

    # watermarks
    cdef int64_t *gmin

    # counters
    cdef int64_t pops, expanded, generated, pruned_pop, pruned_gen
    cdef int64_t tune_writes, goal_sols, early_sols, seed_sols
    cdef int64_t skipped_sole, peak_open, replaced
    cdef bint broke

    # solutions
    cdef int64_t *ccp
    cdef int64_t *ccq
    cdef int64_t *cst
    cdef int64_t *crf
    cdef int64_t *cns
    cdef Py_ssize_t ccount, ccap

    def __cinit__(
        self,
        int64_t[::1] head, int64_t[::1] to,
        int64_t[::1] c1, int64_t[::1] c2, int64_t[::1] opp,
        int64_t[::1] hp, int64_t[::1] hq, int64_t[::1] up, int64_t[::1] uq,
        tune, int64_t[::1] cells,
        int64_t origin, int64_t target, int p,
        bint enhanced, bint compact, bint use_bucket,
        int64_t lo, int64_t hi,
    ):
        cdef Py_ssize_t n = head.shape[0] - 1
        cdef Py_ssize_t i

        self.head = head
        self.to = to
        self.wp = c1 if p == 0 else c2
        self.wq = c2 if p == 0 else c1
        self.opp = opp
        self.hp = hp
        self.hq = hq
        self.up = up
        self.uq = uq
        self.tuning = tune is not None
        self.tune = tune if tune is not None else hp
        self.cells = cells

        self.origin = origin
        self.target = target
        self.own = 1 - p
        self.partner = p
        self.enhanced = enhanced
        self.compact = compact
        self.use_bucket = use_bucket
        self.lo = lo
        self.hi = hi
        self._finished = False

        self.gmin = <int64_t *> malloc(n * sizeof(int64_t))
        self.soccur = <int64_t *> malloc(n * sizeof(int64_t))
        if self.gmin == NULL or self.soccur == NULL:
            raise MemoryError()
        for i in range(n):
            self.gmin[i] = INF
            self.soccur[i] = 0
        # The bound cell doubles as the watermark at the target state.
        if cells[self.own] < INF:
            self.gmin[target] = cells[self.own]

        if use_bucket:
            self.span = hi - lo + 1
            self.bhead = <int64_t *> malloc(self.span * sizeof(int64_t))
            if self.bhead == NULL:
                raise MemoryError()
            for i in range(self.span):
                self.bhead[i] = NO_ARC
            self.cursor = 0

        cdef int64_t slot = self.pool_acquire(
            origin, 0, 0, lo, hq[origin], NO_ARC, 0
        )
        self.q_push(lo, hq[origin], slot)
        self.generated = 1
        self.peak_open = 1

    def __dealloc__(self):
        free(self.pst)
        free(self.pgp)
        free(self.pgq)
        free(self.pfp)
        free(self.pfq)
        free(self.ppref)
        free(self.pppid)
        free(self.pfree)
        free(self.sst)
        free(self.sref)
        free(self.spid)
        free(self.soccur)
        free(self.qfp)
        free(self.qfq)
        free(self.qseq)
        free(self.qref)
        free(self.bhead)
        free(self.blink)
        free(self.gmin)
        free(self.ccp)
        free(self.ccq)
        free(self.cst)
        free(self.crf)
        free(self.cns)

    # -- node pool ---------------------------------------------------------

    cdef int64_t pool_acquire(self, int64_t state, int64_t gp, int64_t gq,
                              int64_t fp, int64_t fq, int64_t pref,
                              int64_t ppid) except -2 nogil:
        cdef int64_t slot
        self.live += 1
        if self.live > self.peak_live:
            self.peak_live = self.live
        if self.nfree > 0:
            self.nfree -= 1
            slot = self.pfree[self.nfree]
            self.reuses += 1
        else:
            if self.psize == self.pcap:
                self.pcap = 64 if self.pcap == 0 else self.pcap * 2
                self.pst = grow(self.pst, self.pcap)
                self.pgp = grow(self.pgp, self.pcap)
                self.pgq = grow(self.pgq, self.pcap)
                self.pfp = grow(self.pfp, self.pcap)
                self.pfq = grow(self.pfq, self.pcap)
                self.ppref = grow(self.ppref, self.pcap)
                self.pppid = grow(self.pppid, self.pcap)
                self.pfree = grow(self.pfree, self.pcap)
                if self.use_bucket:
                    self.blink = grow(self.blink, self.pcap)
            slot = self.psize
            self.psize += 1
        self.pst[slot] = state
        self.pgp[slot] = gp
        self.pgq[slot] = gq
        self.pfp[slot] = fp
        self.pfq[slot] = fq
        self.ppref[slot] = pref
        self.pppid[slot] = ppid
        return slot

    cdef void pool_release(self, int64_t slot) noexcept nogil:
        # Conventional mode retains everything; see NodePool.release.
        if self.compact:
            self.live -= 1
            self.pfree[self.nfree] = slot
            self.nfree += 1

    # -- frontier ----------------------------------------------------------

    cdef inline bint q_less(self, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
        if self.qfp[a] != self.qfp[b]:
            return self.qfp[a] < self.qfp[b]
        if self.qfq[a] != self.qfq[b]:
            return self.qfq[a] < self.qfq[b]
        return self.qseq[a] < self.qseq[b]

    cdef inline void q_swap(self, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
        self.qfp[a], self.qfp[b] = self.qfp[b], self.qfp[a]
        self.qfq[a], self.qfq[b] = self.qfq[b], self.qfq[a]
        self.qseq[a], self.qseq[b] = self.qseq[b], self.qseq[a]
        self.qref[a], self.qref[b] = self.qref[b], self.qref[a]

    cdef int q_push(self, int64_t fp, int64_t fq, int64_t slot) except -1 nogil:
        cdef Py_ssize_t i, parent
        if self.use_bucket:
            self.blink[slot] = self.bhead[fp - self.lo]
            self.bhead[fp - self.lo] = slot
            self.qsize += 1
            return 0
        if self.qsize == self.qcap:
            self.qcap = 64 if self.qcap == 0 else self.qcap * 2
            self.qfp = grow(self.qfp, self.qcap)
            self.qfq = grow(self.qfq, self.qcap)
            self.qseq = grow(self.qseq, self.qcap)
            self.qref = grow(self.qref, self.qcap)
        i = self.qsize
        self.qfp[i] = fp
        self.qfq[i] = fq
        self.qseq[i] = self.seq
        self.qref[i] = slot
        self.seq += 1
        self.qsize += 1
        while i > 0:
            parent = (i - 1) >> 1
            if self.q_less(i, parent):
                self.q_swap(i, parent)
                i = parent
            else:
                break
        return 0

    cdef int64_t q_pop(self) noexcept nogil:
        """Next slot to process, or -2 when the frontier is empty."""
        cdef Py_ssize_t i, child
        cdef int64_t slot
        if self.qsize == 0:
            return -2
        self.qsize -= 1
        if self.use_bucket:
            while self.bhead[self.cursor] == NO_ARC:
                self.cursor += 1
            slot = self.bhead[self.cursor]
            self.bhead[self.cursor] = self.blink[slot]
            return slot
        slot = self.qref[0]
        if self.qsize > 0:
            self.q_swap(0, self.qsize)
            i = 0
            while True:
                child = 2 * i + 1
                if child >= self.qsize:
                    break
                if child + 1 < self.qsize and self.q_less(child + 1, child):
                    child += 1
                if self.q_less(child, i):
                    self.q_swap(i, child)
                    i = child
                else:
                    break
        return slot

    # -- store and solutions -------------------------------------------------

    cdef int64_t store_record(self, int64_t state, int64_t pref,
                              int64_t ppid) except -2 nogil:
        if self.scount == self.scap:
            self.scap = 64 if self.scap == 0 else self.scap * 2
            self.sst = grow(self.sst, self.scap)
            self.sref = grow(self.sref, self.scap)
            self.spid = grow(self.spid, self.scap)
        self.sst[self.scount] = state
        self.sref[self.scount] = pref
        self.spid[self.scount] = ppid
        self.scount += 1
        self.soccur[state] += 1
        return self.soccur[state]

    cdef int sol_append_checked(self, int64_t cp, int64_t cq, int64_t state,
                                int64_t ref, int64_t needs) except -1 nogil:
        if self.ccount > 0 and self.ccp[self.ccount - 1] == cp:
            self.ccount -= 1
            self.replaced += 1
        if self.ccount == self.ccap:
            self.ccap = 16 if self.ccap == 0 else self.ccap * 2
            self.ccp = grow(self.ccp, self.ccap)
            self.ccq = grow(self.ccq, self.ccap)
            self.cst = grow(self.cst, self.ccap)
            self.crf = grow(self.crf, self.ccap)
            self.cns = grow(self.cns, self.ccap)
        self.ccp[self.ccount] = cp
        self.ccq[self.ccount] = cq
        self.cst[self.ccount] = state
        self.crf[self.ccount] = ref
        self.cns[self.ccount] = needs
        self.ccount += 1
        return 0

    # -- the loop ------------------------------------------------------------

    cdef bint _step_c(self) except -1 nogil:
        cdef int64_t ref, slot, state, gp, gq, fp, fq, pref, ppid, myref
        cdef int64_t t, ngp, ngq, nfp, nfq, joined
        cdef Py_ssize_t k

        if self._finished:
            return False
        ref = self.q_pop()
        if ref == -2:
            self._finished = True
            return False

        state = self.pst[ref]
        gp = self.pgp[ref]
        gq = self.pgq[ref]
        fp = self.pfp[ref]
        fq = self.pfq[ref]
        pref = self.ppref[ref]
        ppid = self.pppid[ref]
        self.pool_release(ref)

        self.pops += 1
        if self.enhanced and fp >= bob_cell_load(&self.cells[self.partner]):
            self.broke = True
            self._finished = True
            return False

        if gq >= self.gmin[state] or fq >= bob_cell_load(&self.cells[self.own]):
            self.pruned_pop += 1
            return True

        if self.enhanced and self.tuning and self.gmin[state] >= INF:
            self.tune[state] = gp
            self.tune_writes += 1
        self.gmin[state] = gq

        if self.compact:
            myref = self.store_record(state, pref, ppid)
        else:
            myref = ref

        if state == self.target:
            if gq < bob_cell_load(&self.cells[self.own]):
                bob_cell_store(&self.cells[self.own], gq)
            self.sol_append_checked(gp, gq, state, myref, 0)
            self.goal_sols += 1
            return True

        if self.enhanced:
            joined = gq + self.uq[state]
            if joined < bob_cell_load(&self.cells[self.own]):
                bob_cell_store(&self.cells[self.own], joined)
                self.gmin[self.target] = joined
                self.sol_append_checked(fp, joined, state, myref, 1)
                self.early_sols += 1
                if self.hp[state] == self.up[state]:
                    self.skipped_sole += 1
                    return True

        self.expanded += 1
        for k in range(self.head[state], self.head[state + 1]):
            t = self.to[k]
            if self.hp[t] >= INF:
                self.pruned_gen += 1
                continue
            ngp = gp + self.wp[k]
            ngq = gq + self.wq[k]
            nfq = ngq + self.hq[t]
            if ngq >= self.gmin[t] or nfq >= bob_cell_load(&self.cells[self.own]):
                self.pruned_gen += 1
                continue
            nfp = ngp + self.hp[t]
            if self.enhanced and nfp >= bob_cell_load(&self.cells[self.partner]):
                self.pruned_gen += 1
                continue
            slot = self.pool_acquire(t, ngp, ngq, nfp, nfq, self.opp[k], myref)
            self.q_push(nfp, nfq, slot)
            self.generated += 1
            if self.qsize > self.peak_open:
                self.peak_open = self.qsize
        return True

    # -- Python surface --------------------------------------------------------

    @property
    def finished(self):
        return self._finished

    def seed_extreme(self):
        if self.hp[self.origin] >= INF:
            return
        self.sol_append_checked(
            self.hp[self.origin], self.uq[self.origin], self.origin, SEED_REF, 1
        )
        self.seed_sols += 1

    def step(self):
        return bool(self._step_c())

    def run(self):
        with nogil:
            while self._step_c():
                pass

    def counters(self):
        return (
            int(self.pops), int(self.expanded), int(self.generated),
            int(self.pruned_pop), int(self.pruned_gen), int(self.tune_writes),
            int(self.goal_sols), int(self.early_sols), int(self.seed_sols),
            int(self.replaced), int(self.skipped_sole), int(self.peak_open),
            bool(self.broke), int(self.peak_live), int(self.reuses),
            int(self.psize), int(self.scount),
        )

    def solution_count(self):
        return int(self.ccount)

    def solution(self, Py_ssize_t i):
        if not 0 <= i < self.ccount:
            raise IndexError(i)
        return (
            int(self.ccp[i]), int(self.ccq[i]), int(self.cst[i]),
            int(self.crf[i]), bool(self.cns[i]),
        )

    def store_count(self):
        return int(self.scount)

    def store_state(self, Py_ssize_t row):
        if not 0 <= row < self.scount:
            raise IndexError(row)
        return int(self.sst[row])

    def store_entry(self, Py_ssize_t row):
        if not 0 <= row < self.scount:
            raise IndexError(row)
        return (int(self.sst[row]), int(self.sref[row]), int(self.spid[row]))

    def pool_record(self, Py_ssize_t slot):
        if not 0 <= slot < self.psize:
            raise IndexError(slot)
        return (int(self.pst[slot]), int(self.ppref[slot]), int(self.pppid[slot]))
