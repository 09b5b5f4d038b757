"""Round-based finite approximations of Schützenberger graphs.

Round ``k`` attaches, at every vertex present when the round starts, one
cycle per relator that is not already closed there, and then folds.  Queries
only ever answer ``yes`` (with a witness) or ``unknown``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .igraph import InverseWordGraph, RawGraph, canonical_form, munn_tree
from .words import Presentation, Word, WordLike, as_word, concat, invert

YES = "yes"
UNKNOWN = "unknown"

DEFAULT_VERTEX_CAP = 5_000_000


class ResourceLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class Certificate:
    verdict: str
    rounds: int
    witness: Any = None

    @property
    def yes(self) -> bool:
        return self.verdict == YES

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "rounds": self.rounds, "witness": self.witness}


@dataclass
class Approximation:
    presentation: Presentation
    word: Word
    graph: InverseWordGraph
    rounds: int
    max_vertices: int = field(default=DEFAULT_VERTEX_CAP, repr=False)

    def canonical(self) -> bytes:
        return canonical_form(self.graph)


def _attach(raw: RawGraph, g: InverseWordGraph, v: int, r: Word) -> None:
    letters = r.letters
    p, k = v, 0
    while k < len(letters):
        t = g.step(p, letters[k])
        if t is None:
            break
        p, k = t, k + 1
    if k == len(letters):
        if p != v:
            raw.merge(p, v)
        return
    q, j = v, 0
    while k + j < len(letters):
        s = g.step(q, letters[len(letters) - 1 - j].invert())
        if s is None:
            break
        q, j = s, j + 1
    if k + j == len(letters):
        if p != q:
            raw.merge(p, q)
        return
    raw.add_path(p, Word(letters[k:len(letters) - j]), q)


def expand_round(g: InverseWordGraph, relators, max_vertices: int = DEFAULT_VERTEX_CAP):
    """One full expansion round; returns ``(graph, quotient)``."""
    raw = RawGraph.from_graph(g)
    for v in range(g.n):
        for r in relators:
            _attach(raw, g, v, r)
        if raw.n > max_vertices:
            raise ResourceLimitError(
                f"approximation exceeds {max_vertices} vertices before folding")
    return raw.fold()


def approximate(p: Presentation, w: WordLike, rounds: int,
                max_vertices: int = DEFAULT_VERTEX_CAP) -> Approximation:
    w = p.check_word(as_word(w))
    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    a = Approximation(p, w, munn_tree(w), 0, max_vertices)
    return refine(a, rounds)


def refine(a: Approximation, extra: int) -> Approximation:
    if extra < 0:
        raise ValueError("extra rounds must be non-negative")
    g = a.graph
    for _ in range(extra):
        g, _ = expand_round(g, a.presentation.relators, a.max_vertices)
    return Approximation(a.presentation, a.word, g, a.rounds + extra, a.max_vertices)


Source = Callable[[Presentation, Word, int], Approximation]


def cached_source(maxsize: Optional[int] = 256) -> Source:
    """An ``approximate`` that memoises on (presentation, word, rounds)."""

    @functools.lru_cache(maxsize=maxsize)
    def src(p: Presentation, w: Word, rounds: int) -> Approximation:
        return approximate(p, w, rounds)

    return lambda p, w, rounds: src(p, as_word(w), rounds)


def reads_from_root(a: Approximation, w: WordLike) -> Certificate:
    end = a.graph.read(a.graph.root, w)
    if end is None:
        return Certificate(UNKNOWN, a.rounds)
    return Certificate(YES, a.rounds, {"endpoint": end})


def equals_in_monoid(p: Presentation, u: WordLike, v: WordLike, rounds: int,
                     source: Source = approximate) -> Certificate:
    u, v = p.check_word(as_word(u)), p.check_word(as_word(v))
    au = source(p, u, rounds)
    av = source(p, v, rounds)
    ok_u = av.graph.read(av.graph.root, u) == av.graph.terminal
    ok_v = au.graph.read(au.graph.root, v) == au.graph.terminal
    if ok_u and ok_v:
        return Certificate(YES, rounds, {"u_in_sgraph_v": True, "v_in_sgraph_u": True})
    return Certificate(UNKNOWN, rounds,
                       {"u_in_sgraph_v": ok_u, "v_in_sgraph_u": ok_v})


def is_idempotent(p: Presentation, w: WordLike, rounds: int,
                  source: Source = approximate) -> Certificate:
    w = p.check_word(as_word(w))
    a = source(p, w, rounds)
    if a.graph.terminal == a.graph.root:
        return Certificate(YES, rounds, {"equal_to": str(concat(w, invert(w)))})
    return Certificate(UNKNOWN, rounds)


def closed_vertices(g: InverseWordGraph, relators) -> set:
    return {v for v in range(g.n) if all(g.read(v, r) == v for r in relators)}


@dataclass
class Truncation:
    graph: InverseWordGraph
    radius: int
    centers: list
    vmap: dict


def matched_truncation(g: InverseWordGraph, relators, radius: int) -> Truncation:
    """Cut a finite approximation down to its trustworthy, self-similar part.

    The kept region is the union of radius-``r`` balls around every vertex
    whose ball looks exactly like the root's ball and has a closed interior.
    Far-out vertices of an approximation are unfinished and break the
    symmetry that the complete graph has; this removes them evenly.
    """
    closed = closed_vertices(g, relators)
    radius = max(radius, 1)
    droot = g.distances(g.root)
    while radius > 1 and any(d < radius and v not in closed for v, d in droot.items()):
        radius -= 1

    def interior_ok(c):
        dist = g.distances(c, limit=radius)
        return all(v in closed for v, d in dist.items() if d < radius), dist

    ok, rdist = interior_ok(g.root)
    ref_ball, _ = g.ball(g.root, radius)
    ref = canonical_form(ref_ball)
    sig = g.signature(g.root)
    centers = []
    keep = set()
    for c in range(g.n):
        if g.signature(c) != sig:
            continue
        ok, dist = interior_ok(c)
        if c != g.root and not ok:
            continue
        ball, _ = g.ball(c, radius)
        if canonical_form(ball) != ref:
            continue
        centers.append(c)
        keep.update(dist)
    sub, vmap = g.induced_subgraph(keep, root=g.root)
    reach = sub.distances(sub.root)
    if len(reach) < sub.n:
        inv = {new: old for old, new in vmap.items()}
        keep = {inv[v] for v in reach}
        centers = [c for c in centers if c in keep]
        sub, vmap = g.induced_subgraph(keep, root=g.root)
    sub.terminal = None
    return Truncation(sub, radius, centers, vmap)
