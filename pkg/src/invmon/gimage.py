"""Group images of special inverse monoids.

A :class:`GroupHom` sends every generator to an element of a group that can
decide equality (a :class:`GroupOracle`).  Relators must go to the identity.
With such a hom we can label the vertices of the identity's
Schützenberger graph and look for right units that collide, and we can use
finite admissible graphs as models that separate words.
"""

from __future__ import annotations

import json
import os
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass
from typing import Any, Optional

from .igraph import InverseWordGraph
from .stephen import Approximation, Source, approximate
from .words import Letter, Presentation, Word, WordLike, as_word, check_name, free_reduce


class GroupFormatError(ValueError):
    pass


class UnmappedLetterError(KeyError):
    pass


class InadmissibleHomError(ValueError):
    def __init__(self, relator: Word):
        super().__init__(f"relator {relator} does not map to the identity")
        self.relator = relator


class InadmissibleModelError(ValueError):
    def __init__(self, vertex: int, relator: Word):
        super().__init__(f"relator {relator} does not close at model vertex {vertex}")
        self.vertex = vertex
        self.relator = relator


class GroupOracle(ABC):
    identity: Any

    @abstractmethod
    def multiply(self, e, f): ...

    @abstractmethod
    def invert(self, e): ...

    @abstractmethod
    def canonical(self, e) -> bytes: ...

    @abstractmethod
    def element(self, name: str): ...

    @abstractmethod
    def to_dict(self) -> dict: ...

    def equal(self, e, f) -> bool:
        return self.canonical(e) == self.canonical(f)

    def is_identity(self, e) -> bool:
        return self.equal(e, self.identity)

    def evaluate(self, expr: WordLike):
        """Product of named elements, e.g. ``"c' a'"``."""
        out = self.identity
        for x in as_word(expr):
            e = self.element(x.name)
            out = self.multiply(out, e if x.exp > 0 else self.invert(e))
        return out

    def render(self, e) -> str:
        return self.canonical(e).decode()


class FreeGroupOracle(GroupOracle):
    def __init__(self, generators):
        self.generators = tuple(check_name(g) for g in generators)
        self._known = set(self.generators)
        self.identity = Word()

    def multiply(self, e, f):
        return free_reduce(e + f)

    def invert(self, e):
        return e.invert()

    def canonical(self, e) -> bytes:
        return str(e).encode()

    def element(self, name: str):
        if name not in self._known:
            raise GroupFormatError(f"{name!r} is not a free generator")
        return Word([Letter(name)])

    def to_dict(self) -> dict:
        return {"type": "free", "generators": list(self.generators)}


class FiniteGroupTable:
    """A finite group given by its multiplication table."""

    def __init__(self, table, names=None):
        n = len(table)
        if n < 1 or any(len(row) != n for row in table):
            raise GroupFormatError("table must be a nonempty square array")
        self.order = n
        self.table = [list(map(int, row)) for row in table]
        for row in self.table:
            if sorted(row) != list(range(n)):
                raise GroupFormatError("table is not a Latin square")
        for j in range(n):
            if sorted(self.table[i][j] for i in range(n)) != list(range(n)):
                raise GroupFormatError("table is not a Latin square")
        ids = [e for e in range(n)
               if all(self.table[e][i] == i and self.table[i][e] == i for i in range(n))]
        if not ids:
            raise GroupFormatError("table has no identity")
        self.identity = ids[0]
        t = self.table
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise GroupFormatError(f"not associative at {(a, b, c)}")
        self.names = [str(x) for x in names] if names is not None else [str(i) for i in range(n)]
        if len(self.names) != n or len(set(self.names)) != n:
            raise GroupFormatError("names must be distinct, one per element")
        for x in self.names:
            check_name(x)
        self._inv = [t[a].index(self.identity) for a in range(n)]

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GroupFormatError(f"{name!r} is not an element name") from None

    def nonidentity(self) -> list:
        return [a for a in range(self.order) if a != self.identity]

    def to_dict(self) -> dict:
        return {"order": self.order, "table": self.table, "names": self.names}

    @classmethod
    def from_dict(cls, d) -> "FiniteGroupTable":
        if not isinstance(d, dict) or "table" not in d:
            raise GroupFormatError("group JSON needs a 'table'")
        g = cls(d["table"], d.get("names"))
        if "order" in d and d["order"] != g.order:
            raise GroupFormatError("order does not match table size")
        return g

    @classmethod
    def load(cls, path) -> "FiniteGroupTable":
        with open(path) as fh:
            try:
                return cls.from_dict(json.load(fh))
            except json.JSONDecodeError as exc:
                raise GroupFormatError(f"{path}: {exc}") from None


def cyclic_group(n: int) -> FiniteGroupTable:
    names = ["e"] + [f"g{i}" for i in range(1, n)]
    return FiniteGroupTable([[(i + j) % n for j in range(n)] for i in range(n)], names)


def permutation_group(perms, names=None) -> FiniteGroupTable:
    """Group table of a list of permutations closed under composition.

    The product ``p q`` means apply ``p`` first, then ``q``.
    """
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(q[p[i]] for i in range(len(p)))] for q in perms] for p in perms]
    return FiniteGroupTable(table, names)


def symmetric_group(k: int) -> FiniteGroupTable:
    from itertools import permutations
    perms = sorted(permutations(range(k)))
    names = ["e" if p == tuple(range(k)) else "p" + "".join(str(i) for i in p)
             for p in perms]
    return permutation_group(perms, names)


class FiniteGroupOracle(GroupOracle):
    def __init__(self, group: FiniteGroupTable):
        self.group = group
        self.identity = group.identity

    def multiply(self, e, f):
        return self.group.mul(e, f)

    def invert(self, e):
        return self.group.inv(e)

    def canonical(self, e) -> bytes:
        return self.group.names[e].encode()

    def element(self, name: str):
        return self.group.index(name)

    def to_dict(self) -> dict:
        return {"type": "finite", "group": self.group.to_dict()}


class FreeProductOracle(GroupOracle):
    """Elements are tuples of ``(factor, element)`` syllables, none trivial,
    with neighbouring syllables from different factors."""

    def __init__(self, factors):
        self.factors = list(factors)
        self.identity = ()

    def multiply(self, e, f):
        out = list(e)
        for i, x in f:
            if out and out[-1][0] == i:
                _, y = out.pop()
                z = self.factors[i].multiply(y, x)
                if not self.factors[i].is_identity(z):
                    out.append((i, z))
            else:
                out.append((i, x))
        return tuple(out)

    def invert(self, e):
        return tuple((i, self.factors[i].invert(x)) for i, x in reversed(e))

    def canonical(self, e) -> bytes:
        return b"*".join(b"%d:" % i + self.factors[i].canonical(x) for i, x in e)

    def element(self, name: str):
        hits = []
        for i, fac in enumerate(self.factors):
            try:
                hits.append((i, fac.element(name)))
            except GroupFormatError:
                pass
        if not hits:
            raise GroupFormatError(f"{name!r} names no element of any factor")
        if len(hits) > 1:
            raise GroupFormatError(f"{name!r} is ambiguous between factors")
        i, x = hits[0]
        return () if self.factors[i].is_identity(x) else ((i, x),)

    def to_dict(self) -> dict:
        return {"type": "free_product", "factors": [f.to_dict() for f in self.factors]}


def oracle_from_dict(d, base_dir: str = ".") -> GroupOracle:
    if not isinstance(d, dict) or "type" not in d:
        raise GroupFormatError("oracle spec needs a 'type'")
    kind = d["type"]
    if kind == "free":
        return FreeGroupOracle(d.get("generators", []))
    if kind == "finite":
        if "path" in d:
            return FiniteGroupOracle(FiniteGroupTable.load(os.path.join(base_dir, d["path"])))
        return FiniteGroupOracle(FiniteGroupTable.from_dict(d.get("group")))
    if kind == "free_product":
        return FreeProductOracle([oracle_from_dict(f, base_dir) for f in d.get("factors", [])])
    raise GroupFormatError(f"unknown oracle type {kind!r}")


class GroupHom:
    def __init__(self, oracle: GroupOracle, letter_map: dict,
                 presentation: Optional[Presentation] = None, validate: bool = True,
                 expressions: Optional[dict] = None):
        self.oracle = oracle
        self.letter_map = dict(letter_map)
        self.presentation = presentation
        self.expressions = expressions
        self._inverse = {}
        if presentation is not None and validate:
            bad = validate_hom(presentation, self)
            if bad is not None:
                raise InadmissibleHomError(bad)

    def image(self, x: Letter):
        try:
            e = self.letter_map[x.name]
        except KeyError:
            raise UnmappedLetterError(x.name) from None
        if x.exp > 0:
            return e
        if x.name not in self._inverse:
            self._inverse[x.name] = self.oracle.invert(e)
        return self._inverse[x.name]

    def __call__(self, w: WordLike):
        return sigma(self, w)

    def to_dict(self) -> dict:
        if self.expressions is not None:
            m = dict(self.expressions)
        else:
            m = {a: self.oracle.render(e) for a, e in self.letter_map.items()}
        return {"oracle": self.oracle.to_dict(), "map": m}


def sigma(h: GroupHom, w: WordLike):
    out = h.oracle.identity
    for x in as_word(w):
        out = h.oracle.multiply(out, h.image(x))
    return out


def hom_from_dict(d, presentation: Optional[Presentation] = None,
                  base_dir: str = ".", validate: bool = True) -> GroupHom:
    if not isinstance(d, dict) or "oracle" not in d or "map" not in d:
        raise GroupFormatError("hom JSON needs 'oracle' and 'map'")
    oracle = oracle_from_dict(d["oracle"], base_dir)
    exprs = {str(a): str(e) for a, e in d["map"].items()}
    lm = {a: oracle.evaluate(e) for a, e in exprs.items()}
    return GroupHom(oracle, lm, presentation, validate, expressions=exprs)


def load_hom(path, presentation: Optional[Presentation] = None) -> GroupHom:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GroupFormatError(f"{path}: {exc}") from None
    return hom_from_dict(d, presentation, os.path.dirname(os.path.abspath(path)))


def validate_hom(p: Presentation, h: GroupHom) -> Optional[Word]:
    """``None`` when every relator maps to the identity, else the first failure."""
    for r in p.relators:
        if not h.oracle.is_identity(sigma(h, r)):
            return r
    return None


INJECTIVE_UP_TO = "injective_up_to"
CANDIDATE_WITNESS = "candidate_witness"


@dataclass
class RoiReport:
    kind: str
    rounds: int
    vertices: int
    witness: Optional[tuple] = None
    flags: Optional[list] = None

    @property
    def injective(self) -> bool:
        return self.kind == INJECTIVE_UP_TO

    def to_dict(self) -> dict:
        d = {"result": self.kind, "rounds": self.rounds, "vertices": self.vertices}
        if self.witness is not None:
            d["witness"] = [str(self.witness[0]), str(self.witness[1])]
        if self.flags is not None:
            d["condition_vi"] = self.flags
        return d


def vertex_labels(g: InverseWordGraph, h: GroupHom) -> tuple:
    """Breadth-first access words and their images, keyed by vertex."""
    words = {g.root: ()}
    labels = {g.root: h.oracle.identity}
    order = [g.root]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for x, t in g.traversals(v):
            if t not in words:
                words[t] = words[v] + (x,)
                labels[t] = h.oracle.multiply(labels[v], h.image(x))
                order.append(t)
    return order, {v: Word(w) for v, w in words.items()}, labels


def roi_check(p: Presentation, h: GroupHom, rounds: int,
              source: Source = approximate, with_flags: bool = True) -> RoiReport:
    a = source(p, Word(), rounds)
    g = a.graph
    order, words, labels = vertex_labels(g, h)
    seen = {}
    witness = None
    for v in order:
        key = h.oracle.canonical(labels[v])
        if key in seen:
            witness = (words[seen[key]], words[v])
            break
        seen[key] = v
    flags = check_condition_vi(p, h, a) if with_flags else None
    kind = INJECTIVE_UP_TO if witness is None else CANDIDATE_WITNESS
    return RoiReport(kind, rounds, g.n, witness, flags)


def check_condition_vi(p: Presentation, h: GroupHom, a: Approximation) -> list:
    """Non-loop edges whose letter maps to the identity."""
    g = a.graph
    trivial = {x for x in p.generators if h.oracle.is_identity(h.image(Letter(x)))}
    if not trivial:
        return []
    words = g.access_words()
    out = []
    for u, name, v in g.edges():
        if name in trivial and u != v:
            out.append({"edge": [u, name, v], "vertex": u, "access": str(words[u])})
    return out


def sigma_trivial_right_units(p: Presentation, h: GroupHom, a: Approximation,
                              max_length: int) -> list:
    """Words of length at most ``max_length`` readable from the root that map
    to the identity without returning to the root."""
    g = a.graph
    ident = h.oracle.canonical(h.oracle.identity)
    found = []
    stack = [(g.root, (), h.oracle.identity)]
    while stack:
        v, w, e = stack.pop()
        if w and v != g.root and h.oracle.canonical(e) == ident:
            found.append((Word(w), v))
        if len(w) == max_length:
            continue
        for x, t in g.traversals(v):
            stack.append((t, w + (x,), h.oracle.multiply(e, h.image(x))))
    found.sort(key=lambda f: (len(f[0]), str(f[0])))
    return found


def certified_right_units(a: Approximation, max_length: int) -> int:
    """Number of words of length at most ``max_length`` readable from the root."""
    g = a.graph
    counts = {g.root: 1}
    total = 1
    for _ in range(max_length):
        nxt = {}
        for v, c in counts.items():
            for _, t in g.traversals(v):
                nxt[t] = nxt.get(t, 0) + c
        counts = nxt
        total += sum(counts.values())
    return total


CERTIFIED_DISTINCT = "certified-distinct"
INCONCLUSIVE = "inconclusive"


@dataclass
class Separation:
    verdict: str
    witness: Any = None

    @property
    def distinct(self) -> bool:
        return self.verdict == CERTIFIED_DISTINCT

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "witness": self.witness}


def check_model(p: Presentation, model: InverseWordGraph) -> None:
    for v in range(model.n):
        for r in p.relators:
            if model.read(v, r) != v:
                raise InadmissibleModelError(v, r)


def separate_by_model(p: Presentation, model: InverseWordGraph,
                      u: WordLike, v: WordLike) -> Separation:
    """Try to prove ``u != v`` in the monoid with a finite admissible graph.

    If ``u`` reads from the model root to ``x``, there is a morphism from the
    Schützenberger graph of ``u`` into the model sending its terminal to
    ``x``; were ``u = v``, ``v`` would read to ``x`` as well.
    """
    u, v = p.check_word(as_word(u)), p.check_word(as_word(v))
    check_model(p, model)
    for base, other in ((u, v), (v, u)):
        x = model.read(model.root, base)
        if x is None:
            continue
        y = model.read(model.root, other)
        if y != x:
            return Separation(CERTIFIED_DISTINCT, {
                "base": str(base), "base_end": x, "other": str(other), "other_end": y})
    return Separation(INCONCLUSIVE)


def cayley_graph(p: Presentation, h: GroupHom, max_vertices: int = 100_000) -> InverseWordGraph:
    """Right Cayley graph of the image of ``h`` on the generators of ``p``."""
    gens = [Letter(a) for a in p.generators]
    elems = [h.oracle.identity]
    index = {h.oracle.canonical(h.oracle.identity): 0}
    edges = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for x in gens:
            e = h.oracle.multiply(elems[i], h.image(x))
            key = h.oracle.canonical(e)
            j = index.get(key)
            if j is None:
                if len(elems) >= max_vertices:
                    raise ValueError("group image too large for a Cayley graph")
                j = index[key] = len(elems)
                elems.append(e)
                queue.append(j)
            edges.append((i, x.name, j))
    return InverseWordGraph(len(elems), edges, root=0)
