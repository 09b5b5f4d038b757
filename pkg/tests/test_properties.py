"""Randomized properties; each runs at least 200 hypothesis examples."""

import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from invmon.gimage import FiniteGroupOracle, GroupHom, load_hom, sigma, symmetric_group
from invmon.green import _split_search, _through_root, in_D1, is_right_unit
from invmon.igraph import RawGraph, canonical_form, find_morphism
from invmon.stephen import ResourceLimitError, approximate, equals_in_monoid
from invmon.words import Letter, Presentation, Word, proper_prefixes

from conftest import DATA, REFERENCE_PRESENTATIONS

CASES = settings(max_examples=200, deadline=None)
CAP = 20_000
LABELS = ["a", "b", "c"]


def letters_over(gens, max_size):
    return st.lists(st.builds(Letter, st.sampled_from(list(gens)), st.sampled_from([1, -1])),
                    max_size=max_size).map(Word)


@st.composite
def presentations(draw):
    gens = LABELS[:draw(st.integers(1, 3))]
    rels = draw(st.lists(letters_over(gens, 4).filter(len), min_size=1, max_size=2))
    return Presentation(gens, rels)


@st.composite
def raw_graphs(draw):
    n = draw(st.integers(1, 10))
    edges = []
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        a = draw(st.sampled_from(LABELS))
        edges.append((u, a, v) if draw(st.booleans()) else (v, a, u))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.sampled_from(LABELS),
                                    st.integers(0, n - 1)), max_size=10))
    return n, edges + extra


def build(n, edges, perm):
    raw = RawGraph(n, root=perm[0])
    for u, a, v in edges:
        raw.add_edge(perm[u], a, perm[v])
    return raw.fold()[0]


@CASES
@given(raw_graphs(), st.randoms(use_true_random=False))
def test_folding_confluence(graph, rnd):
    n, edges = graph
    ident = build(n, edges, list(range(n)))
    shuffled = list(edges)
    rnd.shuffle(shuffled)
    perm = list(range(n))
    rnd.shuffle(perm)
    other = build(n, shuffled, perm)
    assert canonical_form(other) == canonical_form(ident)


def small_folded(n, edges):
    return build(n, edges, list(range(n)))


@CASES
@given(raw_graphs(), raw_graphs(), st.integers(0, 100), st.integers(0, 100))
def test_morphism_uniqueness(g1, g2, i, j):
    src, dst = small_folded(*g1), small_folded(*g2)
    assume(src.n <= 5)
    anchor = (i % src.n, j % dst.n)
    found = 0
    for images in itertools.product(range(dst.n), repeat=src.n):
        if images[anchor[0]] != anchor[1]:
            continue
        if all(dst.succ[images[u]].get(a) == images[v] for u, a, v in src.edges()):
            found += 1
    assert found <= 1
    m = find_morphism(src, dst, anchor)
    assert bool(m) == (found == 1)


def approx_or_skip(p, w, k):
    try:
        return approximate(p, w, k, max_vertices=CAP)
    except ResourceLimitError:
        assume(False)


@CASES
@given(presentations(), st.data(), st.integers(0, 2))
def test_round_monotonicity(p, data, k):
    w = data.draw(letters_over(p.generators, 4))
    a = approx_or_skip(p, w, k)
    b = approx_or_skip(p, w, k + 1)
    m = find_morphism(a.graph, b.graph, (a.graph.root, b.graph.root))
    assert m
    assert m.vmap[a.graph.terminal] == b.graph.terminal


REFERENCE_ITEMS = sorted(REFERENCE_PRESENTATIONS.items())


@CASES
@given(st.sampled_from(REFERENCE_ITEMS), st.data())
def test_d1_criteria_agree(item, data):
    _, p = item
    w = data.draw(letters_over(p.generators, 6))
    g = approximate(p, Word(), 2).graph
    split, path = _split_search(g, w), _through_root(g, w)
    assert (split is None) == (path is None)
    r = in_D1(p, w, 2)
    assert r.yes == (split is not None)


def admissible_homs(p, limit=40):
    """Homomorphisms into S3 that kill every relator."""
    g = symmetric_group(3)
    o = FiniteGroupOracle(g)
    out = []
    for images in itertools.product(range(g.order), repeat=len(p.generators)):
        h = GroupHom(o, dict(zip(p.generators, images)))
        if all(o.is_identity(sigma(h, r)) for r in p.relators):
            out.append(h)
        if len(out) >= limit:
            break
    return out


HOMS = {name: admissible_homs(p) for name, p in REFERENCE_ITEMS}
HOMS["fig1"].append(load_hom(f"{DATA}/fig1-hom.json", REFERENCE_PRESENTATIONS["fig1"]))
HOMS["acb_adb"].append(load_hom(f"{DATA}/acb-adb-hom.json", REFERENCE_PRESENTATIONS["acb_adb"]))


@st.composite
def equal_pairs(draw):
    """A reference presentation and two words, the second often obtained from the
    first by inserting relators."""
    name, p = draw(st.sampled_from(REFERENCE_ITEMS))
    u = draw(letters_over(p.generators, 4))
    v = u
    for _ in range(draw(st.integers(0, 2))):
        r = draw(st.sampled_from(list(p.relators)))
        if draw(st.booleans()):
            r = r.invert()
        i = draw(st.integers(0, len(v)))
        v = v[:i] + r + v[i:]
    if draw(st.integers(0, 3)) == 0:
        v = draw(letters_over(p.generators, 4))
    return name, p, u, v


@CASES
@given(equal_pairs())
def test_equality_implies_sigma_equality(case):
    name, p, u, v = case
    if not equals_in_monoid(p, u, v, 2).yes:
        return
    for h in HOMS[name]:
        assert h.oracle.equal(sigma(h, u), sigma(h, v))


@CASES
@given(presentations())
def test_proper_prefixes_are_right_units(p):
    for u in proper_prefixes(p):
        assert is_right_unit(p, u, 1).yes


@pytest.mark.parametrize("name", sorted(REFERENCE_PRESENTATIONS))
def test_reference_presentations_have_admissible_homs(name):
    assert HOMS[name]
