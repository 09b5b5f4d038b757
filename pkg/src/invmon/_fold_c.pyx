# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled folding kernel; same contract as ``_fold_py.fold_edges``."""

from libcpp.vector cimport vector
from libcpp.pair cimport pair

ctypedef pair[int, int] LT  # (label, vertex)


cdef inline int _find(vector[int]& parent, int x) nogil:
    cdef int root = x
    cdef int nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


cdef inline int _lookup(vector[LT]& adj, int a) nogil:
    cdef size_t i
    for i in range(adj.size()):
        if adj[i].first == a:
            return adj[i].second
    return -1


cdef void _absorb(vector[vector[LT]]& adj, int keep, int gone,
                  vector[LT]& pending) nogil:
    cdef size_t i
    cdef int t2
    if adj[keep].size() < adj[gone].size():
        adj[keep].swap(adj[gone])
    for i in range(adj[gone].size()):
        t2 = _lookup(adj[keep], adj[gone][i].first)
        if t2 < 0:
            adj[keep].push_back(adj[gone][i])
        else:
            pending.push_back(LT(adj[gone][i].second, t2))
    adj[gone].clear()
    adj[gone].shrink_to_fit()


def fold_edges(int n, src, lab, dst, merges=()):
    cdef vector[int] parent = vector[int](n)
    cdef vector[vector[LT]] out = vector[vector[LT]](n)
    cdef vector[vector[LT]] inn = vector[vector[LT]](n)
    cdef vector[LT] pending
    cdef vector[int] s_v, l_v, d_v
    cdef int i, u, v, a, t, x, y, keep, gone
    cdef int m = len(src)

    s_v = src
    l_v = lab
    d_v = dst
    for i in range(n):
        parent[i] = i
    for x, y in merges:
        pending.push_back(LT(x, y))

    with nogil:
        for i in range(m):
            u = _find(parent, s_v[i])
            a = l_v[i]
            v = _find(parent, d_v[i])
            t = _lookup(out[u], a)
            if t < 0:
                out[u].push_back(LT(a, v))
            else:
                pending.push_back(LT(t, v))
            t = _lookup(inn[v], a)
            if t < 0:
                inn[v].push_back(LT(a, u))
            else:
                pending.push_back(LT(t, u))

        while pending.size() > 0:
            x = _find(parent, pending.back().first)
            y = _find(parent, pending.back().second)
            pending.pop_back()
            if x == y:
                continue
            if x < y:
                keep = x
                gone = y
            else:
                keep = y
                gone = x
            parent[gone] = keep
            _absorb(out, keep, gone, pending)
            _absorb(inn, keep, gone, pending)

    rep = [_find(parent, i) for i in range(n)]
    edges = []
    cdef size_t j
    for i in range(n):
        if parent[i] == i:
            for j in range(out[i].size()):
                edges.append((i, out[i][j].first, _find(parent, out[i][j].second)))
    edges.sort()
    return rep, edges
