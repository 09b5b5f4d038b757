"""Block covers of Schützenberger graph approximations.

The cover graph is the Munn tree of ``w`` with a copy of the identity's
approximation glued at every tree vertex, folded.  Each glued copy that
survives folding injectively is a preblock; mutually containing preblocks
are grouped, and the groups not contained in any other are the blocks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .igraph import (InverseWordGraph, RawGraph, automorphisms, cut_edges,
                     export_dot, munn_tree)
from .stephen import (DEFAULT_VERTEX_CAP, Approximation, ResourceLimitError, Source,
                      approximate, matched_truncation)
from .words import Presentation, Word, WordLike, as_word


@dataclass
class Preblock:
    root: int
    prefix: Word
    vertices: frozenset
    edges: frozenset
    injective: bool = True


@dataclass
class Block:
    roots: list
    prefixes: list
    vertices: frozenset
    edges: frozenset

    @property
    def root(self) -> int:
        return self.roots[0]

    @property
    def prefix(self) -> Word:
        return self.prefixes[0]


@dataclass
class BlockCover:
    base: Approximation
    preblocks: list
    blocks: list
    uncovered_edges: list
    rounds: int
    rejected: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "vertices": self.base.graph.n,
            "blocks": [{"root": b.root, "roots": b.roots,
                        "prefix": str(b.prefix),
                        "vertices": sorted(b.vertices),
                        "edges": [list(e) for e in sorted(b.edges)]} for b in self.blocks],
            "uncovered": [list(e) for e in self.uncovered_edges],
            "noninjective_copies": [{"root": r.root, "prefix": str(r.prefix)}
                                    for r in self.rejected],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _prefix_map(tree: InverseWordGraph, w: Word) -> dict:
    """Shortest prefix of ``w`` reaching each Munn tree vertex."""
    out = {tree.root: Word()}
    path = tree.trajectory(tree.root, w)
    for i, v in enumerate(path):
        out.setdefault(v, w[:i])
    return out


def lambda_cover(p: Presentation, w: WordLike, rounds: int,
                 source: Source = approximate,
                 max_vertices: int = DEFAULT_VERTEX_CAP) -> BlockCover:
    w = p.check_word(as_word(w))
    one = source(p, Word(), rounds).graph
    tree = munn_tree(w)
    prefixes = _prefix_map(tree, w)
    raw = RawGraph.from_graph(tree)
    copies = []
    for m in range(tree.n):
        copies.append(raw.add_graph(one, at=m))
        if raw.n > max_vertices:
            raise ResourceLimitError(f"cover graph exceeds {max_vertices} vertices")
    g, quotient = raw.fold()
    one_edges = one.edges()

    by_root = {}
    rejected = []
    for m in range(tree.n):
        image = [quotient[x] for x in copies[m]]
        root = quotient[m]
        if root in by_root:
            continue
        verts = frozenset(image)
        pb = Preblock(root, prefixes[m], verts,
                      frozenset((image[u], a, image[v]) for u, a, v in one_edges),
                      injective=len(verts) == one.n)
        if pb.injective:
            by_root[root] = pb
        else:
            rejected.append(pb)
    pres = sorted(by_root.values(), key=lambda b: (len(b.prefix), str(b.prefix), b.root))

    # P_v is inside P_u exactly when the root of P_v is a vertex of P_u.
    inside = {a.root: {b.root for b in pres if b.root in a.vertices} for a in pres}
    blocks = []
    for a in pres:
        cls = [b.root for b in pres if b.root in inside[a.root] and a.root in inside[b.root]]
        if cls[0] != a.root:
            continue
        strictly_inside = any(a.root in inside[b.root] and b.root not in inside[a.root]
                              for b in pres)
        if strictly_inside:
            continue
        members = [by_root[r] for r in sorted(inside[a.root])]
        verts = frozenset().union(*(m.vertices for m in members))
        edges = frozenset().union(*(m.edges for m in members))
        blocks.append(Block(cls, [by_root[r].prefix for r in cls], verts, edges))

    covered = set().union(*(b.edges for b in blocks)) if blocks else set()
    uncovered = [e for e in g.edges() if e not in covered]
    base = Approximation(p, w, g, rounds, max_vertices)
    return BlockCover(base, pres, blocks, uncovered, rounds, rejected)


def _w_path_edges(g: InverseWordGraph, w: Word) -> set:
    out = set()
    v = g.root
    for x in w:
        t = g.step(v, x)
        if t is None:
            break
        out.add((v, x.name, t) if x.exp > 0 else (t, x.name, v))
        v = t
    return out


def verify_cover_laws(c: BlockCover) -> dict:
    g = c.base.graph
    violations = []
    for pb in c.rejected:
        violations.append({"law": "injective_copy", "root": pb.root,
                           "prefix": str(pb.prefix),
                           "detail": "glued copy does not embed"})
    covered = set().union(*(b.vertices for b in c.blocks)) if c.blocks else set()
    for v in range(g.n):
        if v not in covered:
            violations.append({"law": "vertex_covered", "vertex": v,
                               "detail": "vertex not in any preblock image"})
    bridges = cut_edges(g)
    on_path = _w_path_edges(g, c.base.word)
    for e in c.uncovered_edges:
        if e not in bridges:
            violations.append({"law": "uncovered_is_cut", "edge": list(e)})
        if e not in on_path:
            violations.append({"law": "uncovered_on_w_path", "edge": list(e)})
    for i, b in enumerate(c.blocks):
        if not b.prefixes:
            violations.append({"law": "root_is_prefix", "block": i})
    if len(c.blocks) > len(c.base.word) + 1:
        violations.append({"law": "block_count", "blocks": len(c.blocks)})
    return {"ok": not violations, "violations": violations,
            "blocks": len(c.blocks), "uncovered_edges": len(c.uncovered_edges)}


@dataclass
class BlockAction:
    order: int
    permutations: list
    stabilizer: list
    index: int
    truncation_radius: int
    errors: list
    restriction_ok: bool

    def to_dict(self) -> dict:
        return {"automorphism_order": self.order, "permutations": self.permutations,
                "stabilizer_order": len(self.stabilizer), "stabilizer_index": self.index,
                "truncation_radius": self.truncation_radius, "errors": self.errors,
                "restriction_ok": self.restriction_ok}


def block_action(c: BlockCover, radius: Optional[int] = None) -> BlockAction:
    g = c.base.graph
    trunc = matched_truncation(g, c.base.presentation.relators,
                               c.rounds if radius is None else radius)
    t = trunc.graph
    back = {new: old for old, new in trunc.vmap.items()}
    auts = automorphisms(t)
    access = g.access_words()
    owner = {}
    for i, b in enumerate(c.blocks):
        for r in b.roots:
            owner[r] = i
    perms, errors, stab = [], [], []
    restriction_ok = True
    for k, phi in enumerate(auts):
        start = back[phi.vmap[t.root]]
        perm = []
        for i, b in enumerate(c.blocks):
            r = g.read(start, access[b.root])
            j = owner.get(r)
            if j is None:
                errors.append({"automorphism": k, "block": i,
                               "detail": "image of block root is not a block root"})
                j = -1
            perm.append(j)
        perms.append(perm)
        if perm and perm[0] == 0:
            stab.append(k)
            b0 = c.blocks[0].vertices
            for v_new in range(t.n):
                if back[v_new] in b0 and back[phi.vmap[v_new]] not in b0:
                    restriction_ok = False
    orbit = {p[0] for p in perms} if c.blocks else set()
    index = len(orbit) if orbit else 1
    if auts and len(auts) % index:
        errors.append({"detail": "stabilizer index does not divide the group order"})
    return BlockAction(len(auts), perms, stab, index, trunc.radius, errors, restriction_ok)


def disjointness_report(c: BlockCover, order: Optional[int] = None) -> dict:
    overlaps = []
    for i in range(len(c.blocks)):
        for j in range(i + 1, len(c.blocks)):
            common = c.blocks[i].vertices & c.blocks[j].vertices
            if common:
                overlaps.append({"blocks": [i, j], "shared": sorted(common)})
    out = {"pairwise_disjoint": not overlaps, "overlaps": overlaps,
           "blocks": len(c.blocks), "uncovered_edges": len(c.uncovered_edges)}
    if c.uncovered_edges:
        bound = math.factorial(len(c.uncovered_edges))
        out["finite_subgroup"] = {"reason": "an edge lies in no block",
                                  "order_bound": bound}
        if order is not None:
            out["finite_subgroup"]["automorphism_order"] = order
            out["finite_subgroup"]["within_bound"] = order <= bound
    return out


_PALETTE = ["lightblue", "lightpink", "palegreen", "khaki", "plum", "lightsalmon",
            "lightcyan", "wheat"]


def export_cover_dot(c: BlockCover) -> str:
    vattrs = {}
    for i, b in enumerate(c.blocks):
        for v in b.vertices:
            vattrs.setdefault(v, {"style": "filled", "fillcolor": _PALETTE[i % len(_PALETTE)]})
    eattrs = {e: {"color": "red", "penwidth": "2"} for e in c.uncovered_edges}
    return export_dot(c.base.graph, "Cover", vattrs, eattrs)
