"""Pure-Python folding kernel.

Input is an edge list over vertices ``0..n-1`` with integer labels, plus
explicit vertex identifications.  Output is the union-find representative of
every vertex (always the smallest id in its class) and the folded edge list.
The Cython kernel in ``_fold_c.pyx`` implements the same contract.
"""


def fold_edges(n, src, lab, dst, merges=()):
    parent = list(range(n))
    out = [None] * n
    inn = [None] * n
    pending = list(merges)

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for i in range(len(src)):
        u = find(src[i])
        a = lab[i]
        v = find(dst[i])
        ou = out[u]
        if ou is None:
            ou = out[u] = {}
        t = ou.get(a)
        if t is None:
            ou[a] = v
        else:
            pending.append((t, v))
        iv = inn[v]
        if iv is None:
            iv = inn[v] = {}
        s = iv.get(a)
        if s is None:
            iv[a] = u
        else:
            pending.append((s, u))

    while pending:
        x, y = pending.pop()
        x = find(x)
        y = find(y)
        if x == y:
            continue
        keep, gone = (x, y) if x < y else (y, x)
        parent[gone] = keep
        for adj in (out, inn):
            big, small = adj[keep], adj[gone]
            if small is None:
                continue
            if big is None or len(big) < len(small):
                big, small = small, big
                adj[keep] = big
            adj[gone] = None
            if small is None:
                continue
            for a, t in small.items():
                t2 = big.get(a)
                if t2 is None:
                    big[a] = t
                else:
                    pending.append((t, t2))

    rep = [find(v) for v in range(n)]
    edges = []
    for v in range(n):
        if rep[v] == v and out[v]:
            for a, t in out[v].items():
                edges.append((v, a, rep[t]))
    edges.sort()
    return rep, edges
