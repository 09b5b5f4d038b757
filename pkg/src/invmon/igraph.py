"""Rooted deterministic inverse word graphs.

An edge ``(u, a, v)`` is stored once with its positive label and can be
traversed forward as ``a`` and backward as ``a'``.  Vertices are the integers
``0..n-1``.  Graphs are immutable once built; anything that still needs
folding lives in a :class:`RawGraph`.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .folding import fold_edges
from .words import Letter, Word, WordLike, as_word, check_name


class GraphFormatError(ValueError):
    pass


class NotDeterministicError(ValueError):
    def __init__(self, edge1, edge2):
        super().__init__(f"edges {edge1} and {edge2} clash")
        self.edges = (edge1, edge2)


class RawGraph:
    """Edge-labelled graph under construction; may violate determinism."""

    def __init__(self, n: int = 1, root: int = 0, terminal: Optional[int] = None):
        self.n = n
        self.root = root
        self.terminal = terminal
        self.src: list = []
        self.lab: list = []
        self.dst: list = []
        self.merges: list = []

    @classmethod
    def from_graph(cls, g: "InverseWordGraph") -> "RawGraph":
        raw = cls(g.n, g.root, g.terminal)
        for u, a, v in g.edges():
            raw.add_edge(u, a, v)
        return raw

    def add_vertex(self) -> int:
        self.n += 1
        return self.n - 1

    def add_edge(self, u: int, name: str, v: int) -> None:
        self.src.append(u)
        self.lab.append(name)
        self.dst.append(v)

    def add_step(self, u: int, letter: Letter, v: int) -> None:
        if letter.exp > 0:
            self.add_edge(u, letter.name, v)
        else:
            self.add_edge(v, letter.name, u)

    def add_path(self, u: int, w: WordLike, v: Optional[int] = None) -> int:
        """Add a fresh path labelled ``w`` from ``u``; return its end."""
        letters = as_word(w).letters
        cur = u
        for i, x in enumerate(letters):
            nxt = v if (v is not None and i == len(letters) - 1) else self.add_vertex()
            self.add_step(cur, x, nxt)
            cur = nxt
        if not letters and v is not None and v != u:
            self.merge(u, v)
            return v
        return cur

    def merge(self, u: int, v: int) -> None:
        self.merges.append((u, v))

    def add_graph(self, g: "InverseWordGraph", at: int) -> list:
        """Glue a copy of ``g`` with its root identified to ``at``."""
        vmap = [0] * g.n
        base = self.n
        self.n += g.n - 1
        k = 0
        for v in range(g.n):
            if v == g.root:
                vmap[v] = at
            else:
                vmap[v] = base + k
                k += 1
        for u, a, v in g.edges():
            self.add_edge(vmap[u], a, vmap[v])
        return vmap

    def fold(self):
        """Return ``(graph, quotient)``; quotient maps raw ids to graph ids."""
        names = sorted(set(self.lab))
        code = {a: i for i, a in enumerate(names)}
        rep, edges = fold_edges(self.n, self.src, [code[a] for a in self.lab],
                                self.dst, self.merges)
        reps = sorted(set(rep))
        new = {r: i for i, r in enumerate(reps)}
        quotient = [new[r] for r in rep]
        g = InverseWordGraph(
            len(reps),
            [(new[u], names[a], new[v]) for u, a, v in edges],
            root=quotient[self.root],
            terminal=None if self.terminal is None else quotient[self.terminal],
        )
        return g, quotient


class InverseWordGraph:
    def __init__(self, n: int, edges: Iterable = (), root: int = 0,
                 terminal: Optional[int] = None):
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        if not 0 <= root < n or (terminal is not None and not 0 <= terminal < n):
            raise ValueError("root/terminal out of range")
        self.n = n
        self.root = root
        self.terminal = terminal
        self.succ: list = [{} for _ in range(n)]
        self.pred: list = [{} for _ in range(n)]
        count = 0
        for u, a, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {(u, a, v)} out of range")
            t = self.succ[u].get(a)
            if t is not None:
                if t == v:
                    continue
                raise NotDeterministicError((u, a, t), (u, a, v))
            s = self.pred[v].get(a)
            if s is not None:
                raise NotDeterministicError((s, a, v), (u, a, v))
            self.succ[u][a] = v
            self.pred[v][a] = u
            count += 1
        self._num_edges = count

    def __repr__(self) -> str:
        return (f"InverseWordGraph(n={self.n}, edges={self._num_edges}, "
                f"root={self.root}, terminal={self.terminal})")

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def num_edges(self) -> int:
        return self._num_edges

    def edges(self) -> list:
        out = [(u, a, v) for u in range(self.n) for a, v in self.succ[u].items()]
        out.sort()
        return out

    def labels(self) -> set:
        return {a for d in self.succ for a in d}

    def step(self, v: int, x: Letter) -> Optional[int]:
        if x.exp > 0:
            return self.succ[v].get(x.name)
        return self.pred[v].get(x.name)

    def read(self, v: int, w: WordLike) -> Optional[int]:
        for x in as_word(w).letters:
            v = self.step(v, x)
            if v is None:
                return None
        return v

    def trajectory(self, v: int, w: WordLike) -> Optional[list]:
        path = [v]
        for x in as_word(w).letters:
            v = self.step(v, x)
            if v is None:
                return None
            path.append(v)
        return path

    def traversals(self, v: int) -> list:
        """All ``(letter, target)`` moves out of ``v`` in label order."""
        moves = [(Letter(a, 1), t) for a, t in self.succ[v].items()]
        moves += [(Letter(a, -1), s) for a, s in self.pred[v].items()]
        moves.sort(key=lambda m: m[0].sort_key)
        return moves

    def signature(self, v: int) -> tuple:
        return tuple(sorted([(a, 1) for a in self.succ[v]] + [(a, -1) for a in self.pred[v]]))

    def distances(self, sources, limit: Optional[int] = None) -> dict:
        if isinstance(sources, int):
            sources = [sources]
        dist = {s: 0 for s in sources}
        queue = deque(sources)
        while queue:
            v = queue.popleft()
            d = dist[v]
            if limit is not None and d >= limit:
                continue
            for t in self.succ[v].values():
                if t not in dist:
                    dist[t] = d + 1
                    queue.append(t)
            for t in self.pred[v].values():
                if t not in dist:
                    dist[t] = d + 1
                    queue.append(t)
        return dist

    def access_words(self, base: Optional[int] = None) -> dict:
        """Breadth-first shortest word to each reachable vertex, ties by label order."""
        base = self.root if base is None else base
        words = {base: ()}
        queue = deque([base])
        while queue:
            v = queue.popleft()
            for x, t in self.traversals(v):
                if t not in words:
                    words[t] = words[v] + (x,)
                    queue.append(t)
        return {v: Word(w) for v, w in words.items()}

    def is_connected(self) -> bool:
        return len(self.distances(self.root)) == self.n

    def induced_subgraph(self, vertices, root: Optional[int] = None):
        """Return ``(subgraph, old_to_new)`` on the given vertex set."""
        keep = sorted(set(vertices))
        new = {v: i for i, v in enumerate(keep)}
        root = self.root if root is None else root
        edges = [(new[u], a, new[v]) for u in keep
                 for a, v in self.succ[u].items() if v in new]
        term = new.get(self.terminal) if self.terminal is not None else None
        return InverseWordGraph(len(keep), edges, root=new[root], terminal=term), new

    def ball(self, center: int, radius: int):
        dist = self.distances(center, limit=radius)
        sub, new = self.induced_subgraph(dist, root=center)
        sub.terminal = None
        return sub, new

    def relator_closes(self, v: int, r: WordLike) -> bool:
        return self.read(v, r) == v

    def with_marks(self, root: Optional[int] = None, terminal=...) -> "InverseWordGraph":
        g = InverseWordGraph(self.n, self.edges(), root=self.root if root is None else root,
                             terminal=self.terminal if terminal is ... else terminal)
        return g


def munn_tree(w: WordLike) -> InverseWordGraph:
    w = as_word(w)
    raw = RawGraph(1)
    end = raw.add_path(0, w)
    raw.terminal = end
    g, _ = raw.fold()
    return g


def fold(g, return_map: bool = False):
    if isinstance(g, InverseWordGraph):
        g, q = g.with_marks(), list(range(g.n))
    else:
        g, q = g.fold()
    return (g, q) if return_map else g


def read(g: InverseWordGraph, start: int, w: WordLike) -> Optional[int]:
    return g.read(start, w)


@dataclass
class GraphMorphism:
    src: InverseWordGraph
    dst: InverseWordGraph
    vmap: list

    def __call__(self, v: int) -> int:
        return self.vmap[v]

    def edge_image(self, e):
        u, a, v = e
        return (self.vmap[u], a, self.vmap[v])

    def is_bijective(self) -> bool:
        return (self.src.n == self.dst.n and len(set(self.vmap)) == self.src.n
                and self.src.num_edges == self.dst.num_edges)

    def is_identity(self) -> bool:
        return all(self.vmap[v] == v for v in range(len(self.vmap)))

    def preserves_root(self) -> bool:
        return self.vmap[self.src.root] == self.dst.root

    def __bool__(self) -> bool:
        return True


@dataclass
class FailureWitness:
    edge: tuple
    reason: str

    def __bool__(self) -> bool:
        return False


def find_morphism(src: InverseWordGraph, dst: InverseWordGraph, anchor):
    """Unique morphism extending ``anchor``, or a :class:`FailureWitness`."""
    a0, a1 = anchor
    if not 0 <= a0 < src.n or not 0 <= a1 < dst.n:
        raise ValueError(f"anchor {anchor} not in graphs")
    vmap = [-1] * src.n
    vmap[a0] = a1
    queue = deque([a0])
    while queue:
        v = queue.popleft()
        img = vmap[v]
        for x, t in src.traversals(v):
            edge = (v, x.name, t) if x.exp > 0 else (t, x.name, v)
            timg = dst.step(img, x)
            if timg is None:
                return FailureWitness(edge, f"no {x} move at image vertex {img}")
            if vmap[t] < 0:
                vmap[t] = timg
                queue.append(t)
            elif vmap[t] != timg:
                return FailureWitness(edge, f"inconsistent image for vertex {t}")
    if min(vmap) < 0:
        raise ValueError("source graph is not connected")
    return GraphMorphism(src, dst, vmap)


def automorphisms(g: InverseWordGraph) -> list:
    base = g.root
    sig = g.signature(base)
    found = []
    for c in [base] + [v for v in range(g.n) if v != base]:
        if g.signature(c) != sig:
            continue
        m = find_morphism(g, g, (base, c))
        if m and m.is_bijective():
            if c != base:
                assert all(m.vmap[v] != v for v in range(g.n)), \
                    "non-identity automorphism with a fixed point"
            found.append(m)
    return found


def canonical_form(g: InverseWordGraph, base: Optional[int] = None,
                   with_terminal: bool = True) -> bytes:
    base = g.root if base is None else base
    num = {base: 0}
    order = [base]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for _, t in g.traversals(v):
            if t not in num:
                num[t] = len(order)
                order.append(t)
    parts = []
    if with_terminal and g.terminal is not None:
        parts.append(f"T{num.get(g.terminal, -1)}")
    for v in order:
        moves = g.traversals(v)
        parts.append(" ".join(f"{x}>{num[t]}" for x, t in moves))
    return ";".join(parts).encode()


def cut_edges(g: InverseWordGraph) -> set:
    """Edges whose removal disconnects the underlying undirected graph."""
    edges = g.edges()
    adj = [[] for _ in range(g.n)]
    for i, (u, _, v) in enumerate(edges):
        if u != v:
            adj[u].append((v, i))
            adj[v].append((u, i))
    disc = [-1] * g.n
    low = [0] * g.n
    bridges = set()
    timer = 0
    for s in range(g.n):
        if disc[s] >= 0:
            continue
        disc[s] = low[s] = timer
        timer += 1
        stack = [(s, -1, iter(adj[s]))]
        while stack:
            v, pe, it = stack[-1]
            advanced = False
            for t, ei in it:
                if ei == pe:
                    continue
                if disc[t] < 0:
                    disc[t] = low[t] = timer
                    timer += 1
                    stack.append((t, ei, iter(adj[t])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[t])
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[v])
                if low[v] > disc[parent]:
                    bridges.add(edges[pe])
    return bridges


def export_dot(g: InverseWordGraph, name: str = "G", vertex_attrs=None,
               edge_attrs=None) -> str:
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    for v in range(g.n):
        attrs = {}
        if v == g.root:
            attrs["shape"] = "doublecircle"
        if v == g.terminal:
            attrs["style"] = "filled"
        if vertex_attrs and v in vertex_attrs:
            attrs.update(vertex_attrs[v])
        body = ", ".join(f'{k}="{val}"' for k, val in sorted(attrs.items()))
        lines.append(f"  {v} [{body}];" if body else f"  {v};")
    for e in g.edges():
        u, a, v = e
        attrs = {"label": a}
        if edge_attrs and e in edge_attrs:
            attrs.update(edge_attrs[e])
        body = ", ".join(f'{k}="{val}"' for k, val in sorted(attrs.items()))
        lines.append(f"  {u} -> {v} [{body}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dict(g: InverseWordGraph) -> dict:
    d = {"root": g.root, "vertices": list(range(g.n)),
         "edges": [[u, a, v] for u, a, v in g.edges()]}
    if g.terminal is not None:
        d["terminal"] = g.terminal
    return d


def graph_from_dict(d) -> InverseWordGraph:
    if not isinstance(d, dict):
        raise GraphFormatError("graph JSON must be an object")
    try:
        verts = d["vertices"]
        root = d["root"]
        edges = d["edges"]
    except KeyError as exc:
        raise GraphFormatError(f"missing key {exc}") from None
    terminal = d.get("terminal")
    if not isinstance(verts, list) or not verts or \
            not all(isinstance(v, int) for v in verts) or verts != sorted(set(verts)):
        raise GraphFormatError("vertices must be a nonempty sorted list of distinct ints")
    new = {v: i for i, v in enumerate(verts)}
    try:
        es = []
        for e in edges:
            u, a, v = e
            check_name(a)
            es.append((new[u], a, new[v]))
        g = InverseWordGraph(len(verts), es, root=new[root],
                             terminal=None if terminal is None else new[terminal])
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"invalid graph: {exc}") from None
    if not g.is_connected():
        raise GraphFormatError("graph is not connected from its root")
    return g


def export_json(g: InverseWordGraph) -> str:
    return json.dumps(graph_to_dict(g), sort_keys=True)


def import_json(text: str) -> InverseWordGraph:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"malformed JSON: {exc}") from None
    return graph_from_dict(d)
