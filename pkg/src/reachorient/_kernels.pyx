# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reachability kernels (int64 arithmetic; callers guard the range)."""

from libc.stdint cimport int64_t, uint64_t, int32_t
from libc.stdlib cimport malloc, calloc, free

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef int64_t _score_bits(int n, int W, const uint64_t* adj, const int64_t* w,
                         uint64_t* reach, uint64_t* front, uint64_t* nf) noexcept nogil:
    cdef int64_t total = 0, acc
    cdef int u, v, j, b, k
    cdef uint64_t word, any_bit
    for u in range(n):
        if w[u] == 0:
            continue
        for j in range(W):
            reach[j] = 0
            front[j] = 0
        reach[u >> 6] = (<uint64_t>1) << (u & 63)
        front[u >> 6] = reach[u >> 6]
        while True:
            for j in range(W):
                nf[j] = 0
            for j in range(W):
                word = front[j]
                while word:
                    b = __builtin_ctzll(word)
                    word &= word - 1
                    v = (j << 6) + b
                    for k in range(W):
                        nf[k] |= adj[v * W + k]
            any_bit = 0
            for j in range(W):
                nf[j] &= ~reach[j]
                reach[j] |= nf[j]
                front[j] = nf[j]
                any_bit |= nf[j]
            if not any_bit:
                break
        acc = 0
        for j in range(W):
            word = reach[j]
            while word:
                b = __builtin_ctzll(word)
                word &= word - 1
                acc += w[(j << 6) + b]
        total += w[u] * (acc - 1)
    return total


cdef class _Scratch:
    cdef int n, W
    cdef uint64_t* adj
    cdef uint64_t* reach
    cdef uint64_t* front
    cdef uint64_t* nf
    cdef int64_t* w

    def __cinit__(self, int n, weights):
        self.n = n
        self.W = (n + 63) // 64 if n > 0 else 1
        self.adj = <uint64_t*>calloc(<size_t>n * self.W + 1, sizeof(uint64_t))
        self.reach = <uint64_t*>calloc(self.W, sizeof(uint64_t))
        self.front = <uint64_t*>calloc(self.W, sizeof(uint64_t))
        self.nf = <uint64_t*>calloc(self.W, sizeof(uint64_t))
        self.w = <int64_t*>malloc((n + 1) * sizeof(int64_t))
        if not (self.adj and self.reach and self.front and self.nf and self.w):
            raise MemoryError()
        cdef int i
        for i in range(n):
            self.w[i] = 1 if weights is None else weights[i]

    def __dealloc__(self):
        free(self.adj)
        free(self.reach)
        free(self.front)
        free(self.nf)
        free(self.w)

    cdef inline void set_bit(self, int u, int v, bint on) noexcept nogil:
        cdef uint64_t m = (<uint64_t>1) << (v & 63)
        if on:
            self.adj[u * self.W + (v >> 6)] |= m
        else:
            self.adj[u * self.W + (v >> 6)] &= ~m

    cdef inline int64_t value(self) noexcept nogil:
        return _score_bits(self.n, self.W, self.adj, self.w, self.reach, self.front, self.nf)


def score_arcs(int n, arcs, weights):
    cdef _Scratch s = _Scratch(n, weights)
    cdef int u, v
    for u, v in arcs:
        s.set_bit(u, v, True)
    return s.value()


def brute_force_best(int n, edges, arcs, weights):
    """Gray-code sweep over all orientations; see the Python twin for the code layout."""
    cdef _Scratch s = _Scratch(n, weights)
    cdef int m = len(edges)
    cdef Py_ssize_t i
    cdef int u, v, bit, ei
    # multiplicity of each directed pair touched by an edge; arcs only add a base count
    pair_index = {}
    cdef int npairs = 0
    for u, v in edges:
        for key in ((u, v), (v, u)):
            if key not in pair_index:
                pair_index[key] = npairs
                npairs += 1
    cdef int32_t* cnt = <int32_t*>calloc(npairs + 1, sizeof(int32_t))
    cdef int32_t* fwd = <int32_t*>malloc((m + 1) * sizeof(int32_t))
    cdef int32_t* bwd = <int32_t*>malloc((m + 1) * sizeof(int32_t))
    cdef int32_t* eu = <int32_t*>malloc((m + 1) * sizeof(int32_t))
    cdef int32_t* ev = <int32_t*>malloc((m + 1) * sizeof(int32_t))
    if not (cnt and fwd and bwd and eu and ev):
        free(cnt); free(fwd); free(bwd); free(eu); free(ev)
        raise MemoryError()
    cdef int64_t val, best_val
    cdef uint64_t code = 0, best_code = 0, step, limit
    try:
        for u, v in arcs:
            s.set_bit(u, v, True)
            if (u, v) in pair_index:
                cnt[pair_index[(u, v)]] += 1
        for i in range(m):
            u, v = edges[i]
            eu[i] = u
            ev[i] = v
            fwd[i] = pair_index[(u, v)]
            bwd[i] = pair_index[(v, u)]
            cnt[fwd[i]] += 1
            s.set_bit(u, v, True)
        limit = (<uint64_t>1) << m
        with nogil:
            best_val = s.value()
            step = 1
            while step < limit:
                bit = __builtin_ctzll(step)
                ei = m - 1 - bit
                if (code >> bit) & 1:
                    cnt[bwd[ei]] -= 1
                    s.set_bit(ev[ei], eu[ei], cnt[bwd[ei]] > 0)
                    cnt[fwd[ei]] += 1
                    s.set_bit(eu[ei], ev[ei], True)
                else:
                    cnt[fwd[ei]] -= 1
                    s.set_bit(eu[ei], ev[ei], cnt[fwd[ei]] > 0)
                    cnt[bwd[ei]] += 1
                    s.set_bit(ev[ei], eu[ei], True)
                code ^= (<uint64_t>1) << bit
                val = s.value()
                if val > best_val or (val == best_val and code < best_code):
                    best_val = val
                    best_code = code
                step += 1
    finally:
        free(cnt); free(fwd); free(bwd); free(eu); free(ev)
    return best_val, best_code
