"""Compiled decision search: is there an r-vertex set missing at most M edges?

Adjacency and vertex sets are ``uint64`` word arrays (bit ``v & 63`` of word
``v >> 6``). The search is an iterative include/exclude depth-first search with
an explicit stack. A frame at depth ``d`` holds the chosen set P (``|P| = d``),
its missing-edge count and the candidate set C. Each visit to a frame

1. drops candidates that cannot join: those whose non-neighbours in P already
   exceed the remaining budget, or that are too sparsely linked to C;
2. bounds the missing edges any completion must add, using a greedy colouring
   of C into independent sets: the j-th vertex taken from one colour class is
   non-adjacent to the j earlier ones, so it costs its misses into P plus j;
3. branches on the candidate with the fewest misses into P (ties: most
   neighbours in C, then lowest index), removing it from C of the frame.
"""

import numpy as np
from numba import njit

FOUND = 1
EXHAUSTED = 0
OUT_OF_BUDGET = -1

_ONE = np.uint64(1)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def decide(adj, r, max_missing, candidates, budget):
    """Return ``(status, nodes, witness_words)``.

    ``status`` is FOUND, EXHAUSTED or OUT_OF_BUDGET; the witness is only
    meaningful when FOUND.
    """
    n, W = adj.shape
    P = np.zeros((r + 1, W), np.uint64)
    C = np.zeros((r + 1, W), np.uint64)
    miss = np.zeros(r + 1, np.int64)
    for w in range(W):
        C[0, w] = candidates[w]
    verts = np.empty(n, np.int64)
    misses = np.zeros(n, np.int64)
    degc = np.zeros(n, np.int64)
    costs = np.empty(n, np.int64)
    cls = np.empty(n, np.int64)
    U = np.empty(W, np.uint64)
    Q = np.empty(W, np.uint64)
    nodes = 0
    d = 0
    while d >= 0:
        if d == r:
            return FOUND, nodes, P[r].copy()
        nodes += 1
        if nodes > budget:
            return OUT_OF_BUDGET, nodes, P[0].copy()
        k = r - d
        slack = max_missing - miss[d]

        cnt = 0
        while True:
            cnt = 0
            for w in range(W):
                x = C[d, w]
                while x:
                    low = x & (~x + _ONE)
                    verts[cnt] = (w << 6) + _popcount(low - _ONE)
                    cnt += 1
                    x ^= low
            removed = False
            m = 0
            for i in range(cnt):
                v = verts[i]
                inp = 0
                inc = 0
                for w in range(W):
                    inp += _popcount(adj[v, w] & P[d, w])
                    inc += _popcount(adj[v, w] & C[d, w])
                nv = d - inp
                rest = slack - nv
                if rest < 0 or inc < k - 1 - rest:
                    C[d, v >> 6] &= ~(_ONE << np.uint64(v & 63))
                    removed = True
                else:
                    verts[m] = v
                    misses[v] = nv
                    degc[v] = inc
                    m += 1
            cnt = m
            if not removed or cnt < k:
                break
        if cnt < k:
            d -= 1
            continue

        nc = 0
        for w in range(W):
            U[w] = C[d, w]
        for w0 in range(W):
            while U[w0]:
                for w in range(W):
                    Q[w] = U[w]
                ncl = 0
                for w in range(w0, W):
                    while Q[w]:
                        low = Q[w] & (~Q[w] + _ONE)
                        v = (w << 6) + _popcount(low - _ONE)
                        cls[ncl] = misses[v]
                        ncl += 1
                        U[w] &= ~low
                        for w2 in range(W):
                            Q[w2] &= ~adj[v, w2]
                        Q[w] &= ~low
                cls[:ncl].sort()
                for j in range(ncl):
                    costs[nc] = cls[j] + j
                    nc += 1
        costs[:nc].sort()
        lower = 0
        for j in range(k):
            lower += costs[j]
        if lower > slack:
            d -= 1
            continue

        best = verts[0]
        for i in range(1, cnt):
            v = verts[i]
            if misses[v] < misses[best] or (misses[v] == misses[best] and degc[v] > degc[best]):
                best = v
        bw = best >> 6
        bit = _ONE << np.uint64(best & 63)
        C[d, bw] &= ~bit
        for w in range(W):
            P[d + 1, w] = P[d, w]
            C[d + 1, w] = C[d, w]
        P[d + 1, bw] |= bit
        miss[d + 1] = miss[d] + misses[best]
        d += 1
    return EXHAUSTED, nodes, P[0].copy()
