import itertools
import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from invmon.folding import available_backends
from invmon.igraph import (GraphFormatError, InverseWordGraph, NotDeterministicError,
                           RawGraph, automorphisms, canonical_form, cut_edges, export_dot,
                           export_json, find_morphism, fold, import_json, munn_tree)
from invmon.stephen import approximate
from invmon.words import Word

from conftest import FIG1, FIG2, pres

LABELS = ["a", "b", "c"]


def random_raw(rnd, n, m, labels=LABELS, connected=True):
    raw = RawGraph(n)
    if connected:
        for v in range(1, n):
            u = rnd.randrange(v)
            if rnd.random() < 0.5:
                raw.add_edge(u, rnd.choice(labels), v)
            else:
                raw.add_edge(v, rnd.choice(labels), u)
    for _ in range(m):
        raw.add_edge(rnd.randrange(n), rnd.choice(labels), rnd.randrange(n))
    return raw


def naive_fold_partition(n, edges, merges=()):
    """Reference folding: merge clashing pairs until none remain."""
    cls = list(range(n))

    def unite(x, y):
        a, b = cls[x], cls[y]
        if a != b:
            lo, hi = min(a, b), max(a, b)
            for i in range(n):
                if cls[i] == hi:
                    cls[i] = lo
            return True
        return False

    for x, y in merges:
        unite(x, y)
    changed = True
    while changed:
        changed = False
        for (u1, a1, v1), (u2, a2, v2) in itertools.combinations(edges, 2):
            if a1 != a2:
                continue
            if cls[u1] == cls[u2] and cls[v1] != cls[v2]:
                changed |= unite(v1, v2)
            if cls[v1] == cls[v2] and cls[u1] != cls[u2]:
                changed |= unite(u1, u2)
    return cls


def random_graph(rnd, n=6, m=5, labels=LABELS):
    g, _ = random_raw(rnd, n, m, labels).fold()
    return g


def test_munn_tree_examples():
    g = munn_tree("a a'")
    assert g.n == 2 and g.edges() == [(0, "a", 1)] and g.terminal == g.root
    g = munn_tree("x y")
    assert g.n == 3 and g.distances(g.root)[g.terminal] == 2
    g = munn_tree("q q' x y q q'")
    assert g.n == 5 and g.num_edges == 4
    assert g.read(g.root, "x y") == g.terminal
    assert g.read(g.terminal, "q") is not None and g.read(g.root, "q") is not None


def test_fold_merges_leaves():
    raw = RawGraph(3)
    raw.add_edge(0, "a", 1)
    raw.add_edge(0, "a", 2)
    g, q = raw.fold()
    assert g.n == 2 and q[1] == q[2]


def test_fold_deterministic_graph_unchanged():
    g = munn_tree("a b c' a")
    h, q = fold(g, return_map=True)
    assert h.edges() == g.edges() and q == list(range(g.n))
    raw = RawGraph.from_graph(g)
    h, q = raw.fold()
    assert h.edges() == g.edges() and q == list(range(g.n))


@pytest.mark.parametrize("seed", range(60))
def test_fold_matches_reference(seed):
    rnd = random.Random(seed)
    raw = random_raw(rnd, rnd.randint(1, 9), rnd.randint(0, 10))
    merges = [(rnd.randrange(raw.n), rnd.randrange(raw.n)) for _ in range(rnd.randint(0, 2))]
    raw.merges = merges
    g, q = raw.fold()
    ref = naive_fold_partition(raw.n, list(zip(raw.src, raw.lab, raw.dst)), merges)
    blocks_ours = {frozenset(i for i in range(raw.n) if q[i] == c) for c in set(q)}
    blocks_ref = {frozenset(i for i in range(raw.n) if ref[i] == c) for c in set(ref)}
    assert blocks_ours == blocks_ref


@pytest.mark.parametrize("seed", range(40))
def test_backends_agree(seed):
    rnd = random.Random(1000 + seed)
    raw = random_raw(rnd, rnd.randint(1, 30), rnd.randint(0, 40))
    lab = [LABELS.index(a) for a in raw.lab]
    results = [f(raw.n, raw.src, lab, raw.dst, [(0, raw.n - 1)])
               for f in available_backends().values()]
    assert all(r == results[0] for r in results)


def test_read_examples():
    a = approximate(pres(FIG2), "", 3)
    g = a.graph
    assert g.read(g.root, "y") is None
    assert g.read(g.root, "x y") == g.read(g.root, "x")
    for v in range(g.n):
        assert g.read(v, "") == v


@given(st.integers(0, 10_000), st.lists(st.tuples(st.sampled_from(LABELS),
                                                  st.sampled_from([1, -1])), max_size=6))
def test_read_functional_and_reversible(seed, letters):
    g = random_graph(random.Random(seed))
    w = Word(letters)
    for v in range(g.n):
        u = g.read(v, w)
        if u is not None:
            assert g.read(u, w.invert()) == v


def brute_morphisms(src, dst, anchor):
    found = []
    for images in itertools.product(range(dst.n), repeat=src.n):
        if images[anchor[0]] != anchor[1]:
            continue
        if all(dst.succ[images[u]].get(a) == images[v] for u, a, v in src.edges()):
            found.append(list(images))
    return found


@pytest.mark.parametrize("seed", range(40))
def test_find_morphism_matches_brute_force(seed):
    rnd = random.Random(seed)
    src = random_graph(rnd, n=rnd.randint(1, 4), m=2, labels=["a", "b"])
    dst = random_graph(rnd, n=rnd.randint(1, 5), m=4, labels=["a", "b"])
    anchor = (rnd.randrange(src.n), rnd.randrange(dst.n))
    brute = brute_morphisms(src, dst, anchor)
    assert len(brute) <= 1  # uniqueness
    m = find_morphism(src, dst, anchor)
    if brute:
        assert m and m.vmap == brute[0]
    else:
        assert not m and m.edge in src.edges()


def test_find_morphism_examples():
    g = approximate(pres(FIG1), "", 2).graph
    m = find_morphism(g, g, (g.root, g.root))
    assert m and m.is_identity()
    assert find_morphism(munn_tree("a a'"), g, (0, g.root))
    with pytest.raises(ValueError):
        find_morphism(g, g, (g.n, 0))


def brute_automorphisms(g):
    out = []
    for perm in itertools.permutations(range(g.n)):
        if all(g.succ[perm[u]].get(a) == perm[v] for u, a, v in g.edges()):
            out.append(list(perm))
    return sorted(out)


@pytest.mark.parametrize("seed", range(30))
def test_automorphisms_match_brute_force(seed):
    rnd = random.Random(seed)
    # cycles labelled periodically have rotations
    n = rnd.randint(1, 6)
    period = rnd.choice([d for d in range(1, n + 1) if n % d == 0])
    pattern = [rnd.choice(["a", "b"]) for _ in range(period)]
    g = InverseWordGraph(n, [(i, pattern[i % period], (i + 1) % n) for i in range(n)])
    auts = automorphisms(g)
    assert sorted(m.vmap for m in auts) == brute_automorphisms(g)
    assert auts[0].is_identity()


@pytest.mark.parametrize("seed", range(20))
def test_automorphisms_random_graphs(seed):
    g = random_graph(random.Random(seed), n=6, m=3, labels=["a", "b"])
    assert sorted(m.vmap for m in automorphisms(g)) == brute_automorphisms(g)


def relabel(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    return InverseWordGraph(g.n, [(perm[u], a, perm[v]) for u, a, v in g.edges()],
                            root=perm[g.root],
                            terminal=None if g.terminal is None else perm[g.terminal])


@pytest.mark.parametrize("seed", range(40))
def test_canonical_form_invariant_under_relabelling(seed):
    rnd = random.Random(seed)
    g = random_graph(rnd, n=8, m=6)
    assert canonical_form(relabel(g, rnd)) == canonical_form(g)


def rooted_isomorphic(g, h):
    if g.n != h.n or g.num_edges != h.num_edges:
        return False
    m = find_morphism(g, h, (g.root, h.root))
    return bool(m) and m.is_bijective()


@pytest.mark.parametrize("seed", range(40))
def test_canonical_form_decides_rooted_isomorphism(seed):
    rnd = random.Random(seed)
    g = random_graph(rnd, n=4, m=2, labels=["a", "b"])
    h = random_graph(rnd, n=4, m=2, labels=["a", "b"])
    assert (canonical_form(g, with_terminal=False) == canonical_form(h, with_terminal=False)) \
        == rooted_isomorphic(g, h)


def test_canonical_form_small_cases():
    assert canonical_form(munn_tree("x y")) != canonical_form(munn_tree("x z"))
    single = InverseWordGraph(1)
    assert canonical_form(single) == canonical_form(InverseWordGraph(1)) == b""


def test_json_round_trip():
    g = approximate(pres(FIG1), "a c", 2).graph
    text = export_json(g)
    h = import_json(text)
    assert canonical_form(h) == canonical_form(g)
    assert export_json(h) == text
    d = json.loads(text)
    assert d["edges"] == sorted(d["edges"])


def test_json_import_errors():
    for bad in ["{", "[]", '{"root": 0, "vertices": [0], "edges": [[0, "a", 5]]}',
                '{"root": 0, "vertices": [0, 1], "edges": []}',
                '{"root": 0, "vertices": [0, 1, 2], "edges": [[0, "a", 1], [0, "a", 2]]}',
                '{"root": 0, "vertices": [1, 0], "edges": []}']:
        with pytest.raises(GraphFormatError):
            import_json(bad)


def test_non_deterministic_construction_rejected():
    with pytest.raises(NotDeterministicError):
        InverseWordGraph(3, [(0, "a", 1), (0, "a", 2)])
    with pytest.raises(NotDeterministicError):
        InverseWordGraph(3, [(1, "a", 0), (2, "a", 0)])


def test_dot_export():
    g = approximate(pres(FIG1), "", 1).graph
    dot = export_dot(g)
    a_end = g.read(g.root, "a")
    mid = g.read(a_end, "c")
    assert mid == g.read(a_end, "d")
    assert f'{a_end} -> {mid} [label="c"];' in dot
    assert f'{a_end} -> {mid} [label="d"];' in dot
    assert dot.count("->") == g.num_edges
    one = export_dot(InverseWordGraph(1))
    assert one.startswith("digraph") and "0 [" in one and "->" not in one


def brute_cut_edges(g):
    out = set()
    edges = g.edges()
    for e in edges:
        rest = [f for f in edges if f != e]
        adj = {v: set() for v in range(g.n)}
        for u, _, v in rest:
            adj[u].add(v)
            adj[v].add(u)
        seen, stack = {0}, [0]
        while stack:
            for t in adj[stack.pop()]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        if len(seen) < g.n:
            out.add(e)
    return out


@pytest.mark.parametrize("seed", range(40))
def test_cut_edges_match_brute_force(seed):
    g = random_graph(random.Random(seed), n=9, m=rnd_m(seed))
    assert cut_edges(g) == brute_cut_edges(g)


def rnd_m(seed):
    return seed % 5


def test_ball_and_induced_subgraph():
    g = approximate(pres(FIG2), "", 4).graph
    b, vmap = g.ball(g.root, 2)
    assert b.n == 3 and b.root == vmap[g.root]
