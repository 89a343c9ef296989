# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernel: states are packed little-endian uint64 words held in bytes.

Behaviour matches ``_pykernel`` step for step; only the state encoding differs.
"""
import heapq
import time

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset
from cpython.bytes cimport PyBytes_AS_STRING, PyBytes_FromStringAndSize

cdef int64_t BIG = 4611686018427387904

INF = -1
SOLVED, UNSOLVABLE, LIMIT = 0, 1, 2


cdef void _load(uint64_t* dst, int nwords, int n, list masks):
    cdef int a, w
    cdef object m
    for a in range(n):
        m = masks[a]
        for w in range(nwords):
            dst[a * nwords + w] = <uint64_t>((m >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)


cdef class Kernel:
    cdef int n_props, n_actions, nwords
    cdef uint64_t* pre_pos
    cdef uint64_t* pre_neg
    cdef uint64_t* add
    cdef uint64_t* dele
    cdef int64_t* cost
    cdef uint64_t* goal_pos
    cdef uint64_t* goal_neg
    cdef uint64_t* scratch
    # hmax tables (CSR)
    cdef int* trig_start
    cdef int* trig
    cdef int* npre
    cdef int* add_start
    cdef int* adds
    cdef int* goal_props
    cdef int n_goal_props
    cdef int64_t* hcost
    cdef int* counter
    cdef char* is_goal_buf
    cdef int64_t* heap_key
    cdef int* heap_val
    cdef int heap_cap
    cdef public object init

    def __cinit__(self):
        self.pre_pos = self.pre_neg = self.add = self.dele = NULL
        self.goal_pos = self.goal_neg = self.scratch = NULL
        self.cost = self.hcost = self.heap_key = NULL
        self.trig_start = self.trig = self.npre = self.add_start = self.adds = NULL
        self.goal_props = self.counter = self.heap_val = NULL
        self.is_goal_buf = NULL

    def __init__(self, pt):
        cdef int a, p, w, k, total_pre, total_add
        self.n_props = pt.n_props
        self.n_actions = len(pt.cost)
        self.nwords = max(1, (pt.n_props + 63) // 64)
        cdef int nA = self.n_actions, nW = self.nwords, nF = self.n_props
        self.pre_pos = <uint64_t*>malloc(max(1, nA * nW) * sizeof(uint64_t))
        self.pre_neg = <uint64_t*>malloc(max(1, nA * nW) * sizeof(uint64_t))
        self.add = <uint64_t*>malloc(max(1, nA * nW) * sizeof(uint64_t))
        self.dele = <uint64_t*>malloc(max(1, nA * nW) * sizeof(uint64_t))
        self.cost = <int64_t*>malloc(max(1, nA) * sizeof(int64_t))
        self.goal_pos = <uint64_t*>malloc(nW * sizeof(uint64_t))
        self.goal_neg = <uint64_t*>malloc(nW * sizeof(uint64_t))
        self.scratch = <uint64_t*>malloc(3 * nW * sizeof(uint64_t))
        _load(self.pre_pos, nW, nA, list(pt.pre_pos))
        _load(self.pre_neg, nW, nA, list(pt.pre_neg))
        _load(self.add, nW, nA, list(pt.add))
        _load(self.dele, nW, nA, list(pt.delete))
        _load(self.goal_pos, nW, 1, [pt.goal_pos])
        _load(self.goal_neg, nW, 1, [pt.goal_neg])
        for a in range(nA):
            self.cost[a] = pt.cost[a]
        self.init = self.pack(pt.init)

        # CSR tables for hmax
        self.npre = <int*>malloc(max(1, nA) * sizeof(int))
        self.trig_start = <int*>malloc((nF + 1) * sizeof(int))
        self.add_start = <int*>malloc((nA + 1) * sizeof(int))
        memset(self.trig_start, 0, (nF + 1) * sizeof(int))
        total_pre = 0
        total_add = 0
        for a in range(nA):
            self.npre[a] = 0
            for p in range(nF):
                if self.pre_pos[a * nW + (p >> 6)] >> (p & 63) & 1:
                    self.npre[a] += 1
                    self.trig_start[p + 1] += 1
                if self.add[a * nW + (p >> 6)] >> (p & 63) & 1:
                    total_add += 1
            total_pre += self.npre[a]
        for p in range(nF):
            self.trig_start[p + 1] += self.trig_start[p]
        self.trig = <int*>malloc(max(1, total_pre) * sizeof(int))
        self.adds = <int*>malloc(max(1, total_add) * sizeof(int))
        cdef int* fill = <int*>malloc((nF + 1) * sizeof(int))
        memcpy(fill, self.trig_start, (nF + 1) * sizeof(int))
        k = 0
        for a in range(nA):
            self.add_start[a] = k
            for p in range(nF):
                if self.pre_pos[a * nW + (p >> 6)] >> (p & 63) & 1:
                    self.trig[fill[p]] = a
                    fill[p] += 1
                if self.add[a * nW + (p >> 6)] >> (p & 63) & 1:
                    self.adds[k] = p
                    k += 1
        self.add_start[nA] = k
        free(fill)
        self.n_goal_props = 0
        self.goal_props = <int*>malloc(max(1, nF) * sizeof(int))
        for p in range(nF):
            if self.goal_pos[p >> 6] >> (p & 63) & 1:
                self.goal_props[self.n_goal_props] = p
                self.n_goal_props += 1
        self.hcost = <int64_t*>malloc(max(1, nF) * sizeof(int64_t))
        self.counter = <int*>malloc(max(1, nA) * sizeof(int))
        self.is_goal_buf = <char*>malloc(max(1, nF))
        self.heap_cap = nF + total_add + 1
        self.heap_key = <int64_t*>malloc(self.heap_cap * sizeof(int64_t))
        self.heap_val = <int*>malloc(self.heap_cap * sizeof(int))

    def __dealloc__(self):
        free(self.pre_pos); free(self.pre_neg); free(self.add); free(self.dele)
        free(self.cost); free(self.goal_pos); free(self.goal_neg); free(self.scratch)
        free(self.trig_start); free(self.trig); free(self.npre); free(self.add_start)
        free(self.adds); free(self.goal_props); free(self.hcost); free(self.counter)
        free(self.is_goal_buf); free(self.heap_key); free(self.heap_val)

    def pack(self, m):
        return int(m).to_bytes(8 * self.nwords, "little")

    def unpack(self, bytes b):
        return int.from_bytes(b, "little")

    cdef inline bint _applicable(self, const uint64_t* s, int a) nogil:
        cdef int w, nW = self.nwords
        cdef const uint64_t* pp = self.pre_pos + a * nW
        cdef const uint64_t* pn = self.pre_neg + a * nW
        for w in range(nW):
            if (s[w] & pp[w]) != pp[w] or (s[w] & pn[w]):
                return False
        return True

    cdef inline bint _goal(self, const uint64_t* s) nogil:
        cdef int w
        for w in range(self.nwords):
            if (s[w] & self.goal_pos[w]) != self.goal_pos[w] or (s[w] & self.goal_neg[w]):
                return False
        return True

    def is_goal(self, state):
        cdef bytes b = self.pack(state)
        return self._goal(<const uint64_t*>PyBytes_AS_STRING(b))

    def successors(self, state):
        cdef bytes b = self.pack(state)
        cdef int a
        out = []
        for a, t in self._succ(b):
            out.append((a, self.unpack(t)))
        return out

    cdef list _succ(self, bytes b):
        cdef int a, w, nW = self.nwords
        cdef uint64_t* s = self.scratch
        cdef uint64_t* t = self.scratch + nW
        memcpy(s, PyBytes_AS_STRING(b), nW * 8)
        out = []
        for a in range(self.n_actions):
            if not self._applicable(s, a):
                continue
            for w in range(nW):
                t[w] = (s[w] & ~self.dele[a * nW + w]) | self.add[a * nW + w]
            out.append((a, PyBytes_FromStringAndSize(<char*>t, nW * 8)))
        return out

    cdef inline void _hpush(self, int* n, int64_t key, int val) nogil:
        cdef int i = n[0], parent
        n[0] += 1
        while i > 0:
            parent = (i - 1) >> 1
            if self.heap_key[parent] < key or (self.heap_key[parent] == key and self.heap_val[parent] <= val):
                break
            self.heap_key[i] = self.heap_key[parent]
            self.heap_val[i] = self.heap_val[parent]
            i = parent
        self.heap_key[i] = key
        self.heap_val[i] = val

    cdef inline void _hpop(self, int* n, int64_t* key, int* val) nogil:
        cdef int i = 0, child, last
        cdef int64_t lk
        cdef int lv
        key[0] = self.heap_key[0]
        val[0] = self.heap_val[0]
        n[0] -= 1
        last = n[0]
        lk = self.heap_key[last]
        lv = self.heap_val[last]
        while True:
            child = 2 * i + 1
            if child >= last:
                break
            if child + 1 < last and (self.heap_key[child + 1] < self.heap_key[child] or
                                     (self.heap_key[child + 1] == self.heap_key[child] and
                                      self.heap_val[child + 1] < self.heap_val[child])):
                child += 1
            if lk < self.heap_key[child] or (lk == self.heap_key[child] and lv <= self.heap_val[child]):
                break
            self.heap_key[i] = self.heap_key[child]
            self.heap_val[i] = self.heap_val[child]
            i = child
        self.heap_key[i] = lk
        self.heap_val[i] = lv

    cdef int64_t _hmax(self, const uint64_t* s) nogil:
        cdef int nF = self.n_props, nA = self.n_actions
        cdef int p, a, q, k, n = 0, left
        cdef int64_t c, nc
        if self.n_goal_props == 0:
            return 0
        for p in range(nF):
            self.hcost[p] = BIG
            self.is_goal_buf[p] = 0
        for k in range(self.n_goal_props):
            self.is_goal_buf[self.goal_props[k]] = 1
        for p in range(nF):
            if s[p >> 6] >> (p & 63) & 1:
                self.hcost[p] = 0
                self._hpush(&n, 0, p)
        for a in range(nA):
            self.counter[a] = self.npre[a]
            if self.npre[a] == 0:
                c = self.cost[a]
                for k in range(self.add_start[a], self.add_start[a + 1]):
                    q = self.adds[k]
                    if c < self.hcost[q]:
                        self.hcost[q] = c
                        self._hpush(&n, c, q)
        left = self.n_goal_props
        while n > 0:
            self._hpop(&n, &c, &p)
            if c > self.hcost[p]:
                continue
            if self.is_goal_buf[p]:
                self.is_goal_buf[p] = 0
                left -= 1
                if left == 0:
                    return c
            for k in range(self.trig_start[p], self.trig_start[p + 1]):
                a = self.trig[k]
                self.counter[a] -= 1
                if self.counter[a] == 0:
                    nc = c + self.cost[a]
                    for q in range(self.add_start[a], self.add_start[a + 1]):
                        if nc < self.hcost[self.adds[q]]:
                            self.hcost[self.adds[q]] = nc
                            self._hpush(&n, nc, self.adds[q])
        return -1

    def hmax(self, state):
        cdef bytes b = self.pack(state)
        memcpy(self.scratch, PyBytes_AS_STRING(b), self.nwords * 8)
        return self._hmax(self.scratch)

    cdef int64_t _h(self, bytes b, bint use_hmax):
        if not use_hmax:
            return 0
        memcpy(self.scratch, PyBytes_AS_STRING(b), self.nwords * 8)
        return self._hmax(self.scratch)

    def astar(self, bint use_hmax, long long max_expansions, double max_seconds):
        """Returns (status, action indices, cost, expanded, generated, peak_open)."""
        cdef double start = time.perf_counter()
        cdef bytes init = self.init, s, t
        cdef int64_t h0, ht, gs, nt
        cdef long long expanded = 0, generated = 0, seq = 0
        cdef Py_ssize_t peak = 1
        cdef int a, w, nW = self.nwords
        cdef uint64_t* sp = self.scratch
        cdef uint64_t* tp = self.scratch + nW
        h0 = self._h(init, use_hmax)
        if h0 == -1:
            return UNSOLVABLE, [], 0, 0, 0, 0
        cdef dict g = {init: 0}
        cdef dict parent = {init: (None, -1)}
        cdef dict hcache = {init: h0}
        cdef set closed = set()
        cdef list heap = [(h0, h0, seq, init)]
        heappush = heapq.heappush
        heappop = heapq.heappop
        while heap:
            s = heappop(heap)[3]
            if s in closed:
                continue
            closed.add(s)
            gs = g[s]
            memcpy(sp, PyBytes_AS_STRING(s), nW * 8)
            if self._goal(sp):
                plan = []
                while True:
                    prev, a = parent[s]
                    if a < 0:
                        break
                    plan.append(a)
                    s = prev
                plan.reverse()
                return SOLVED, plan, gs, expanded, generated, peak
            if expanded >= max_expansions:
                return LIMIT, [], 0, expanded, generated, peak
            if max_seconds > 0 and expanded & 255 == 0 and time.perf_counter() - start > max_seconds:
                return LIMIT, [], 0, expanded, generated, peak
            expanded += 1
            for a in range(self.n_actions):
                if not self._applicable(sp, a):
                    continue
                for w in range(nW):
                    tp[w] = (sp[w] & ~self.dele[a * nW + w]) | self.add[a * nW + w]
                t = PyBytes_FromStringAndSize(<char*>tp, nW * 8)
                if t in closed:
                    continue
                nt = gs + self.cost[a]
                old = g.get(t)
                if old is not None and <int64_t>old <= nt:
                    continue
                cached = hcache.get(t)
                if cached is None:
                    ht = self._hmax_bytes(t) if use_hmax else 0
                    hcache[t] = ht
                else:
                    ht = cached
                if ht == -1:
                    continue
                g[t] = nt
                parent[t] = (s, a)
                seq += 1
                generated += 1
                heappush(heap, (nt + ht, ht, seq, t))
                if len(heap) > peak:
                    peak = len(heap)
        return UNSOLVABLE, [], 0, expanded, generated, peak

    cdef int64_t _hmax_bytes(self, bytes t):
        # hmax works on its own copy so the expanding state in scratch stays intact.
        cdef int nW = self.nwords
        cdef uint64_t* buf = self.scratch + 2 * nW
        memcpy(buf, PyBytes_AS_STRING(t), nW * 8)
        return self._hmax(buf)
