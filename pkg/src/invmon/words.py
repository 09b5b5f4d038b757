"""Involutive words over a generator alphabet and special presentations.

Text format for presentations::

    gens: a b c d ; rels: a c b, a d b, c c', d d'

A word is a whitespace-separated sequence of generator names, each optionally
followed by an apostrophe for the formal inverse.  A relator may carry a
trailing ``= 1`` which is ignored.  ``#`` starts a comment.
"""

from __future__ import annotations

import hashlib
import re
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

_NAME_RE = re.compile(r"[^\s',;:=#]+")


class WordSyntaxError(ValueError):
    """Raised for malformed words or presentations; carries a position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UndeclaredGeneratorError(ValueError):
    def __init__(self, name: str, line: int = 1, column: int = 1):
        super().__init__(
            f"line {line}, column {column}: undeclared generator {name!r}")
        self.name = name
        self.line = line
        self.column = column


def check_name(name: str) -> str:
    if not isinstance(name, str) or not _NAME_RE.fullmatch(name):
        raise ValueError(f"invalid generator name {name!r}")
    return name


class Letter(NamedTuple):
    name: str
    exp: int = 1

    def invert(self) -> "Letter":
        return Letter(self.name, -self.exp)

    def __str__(self) -> str:
        return self.name if self.exp > 0 else self.name + "'"

    @property
    def sort_key(self):
        # label order used everywhere: (generator name, exponent)
        return (self.name, self.exp)


class Word:
    """An immutable word over ``A`` and its formal inverses."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable = ()):
        out = []
        for x in letters:
            if not isinstance(x, Letter):
                x = Letter(*x)
            if x.exp not in (1, -1):
                raise ValueError(f"exponent must be +1 or -1, got {x.exp}")
            out.append(x)
        self.letters: tuple = tuple(out)
        self._hash = None

    @classmethod
    def parse(cls, text: str) -> "Word":
        letters = []
        for tok, line, col in _tokens(text):
            letters.append(_parse_token(tok, line, col))
        return cls(letters)

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + as_word(other).letters)

    def __eq__(self, other) -> bool:
        if isinstance(other, str):
            other = Word.parse(other)
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def __lt__(self, other: "Word") -> bool:
        return ((len(self), [x.sort_key for x in self])
                < (len(other), [x.sort_key for x in other]))

    def invert(self) -> "Word":
        return invert(self)

    def generators(self) -> set:
        return {x.name for x in self.letters}


WordLike = Union[Word, str, Sequence]


def as_word(w: WordLike) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return Word.parse(w)
    return Word(w)


def invert(w: WordLike) -> Word:
    w = as_word(w)
    return Word(x.invert() for x in reversed(w.letters))


def free_reduce(w: WordLike) -> Word:
    stack: list = []
    for x in as_word(w):
        if stack and stack[-1].name == x.name and stack[-1].exp == -x.exp:
            stack.pop()
        else:
            stack.append(x)
    return Word(stack)


def concat(*words: WordLike) -> Word:
    out: list = []
    for w in words:
        out.extend(as_word(w).letters)
    return Word(out)


class Presentation:
    """Special inverse monoid presentation ``<A | r = 1, ...>``.

    Relators are kept literally; they are not freely reduced.
    """

    def __init__(self, generators: Iterable[str], relators: Iterable[WordLike] = ()):
        gens = tuple(check_name(g) for g in generators)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator names")
        self.generators: tuple = gens
        rels = tuple(as_word(r) for r in relators)
        known = set(gens)
        for r in rels:
            if len(r) == 0:
                raise ValueError("empty relator")
            for x in r:
                if x.name not in known:
                    raise UndeclaredGeneratorError(x.name)
        self.relators: tuple = rels

    def __eq__(self, other) -> bool:
        return (isinstance(other, Presentation)
                and self.generators == other.generators
                and self.relators == other.relators)

    def __hash__(self) -> int:
        return hash((self.generators, self.relators))

    def __repr__(self) -> str:
        return f"Presentation({format_presentation(self)!r})"

    def check_word(self, w: WordLike) -> Word:
        w = as_word(w)
        known = set(self.generators)
        for x in w:
            if x.name not in known:
                raise UndeclaredGeneratorError(x.name)
        return w

    def digest(self) -> str:
        return hashlib.sha256(format_presentation(self).encode()).hexdigest()


def _tokens(text: str, line: int = 1, col: int = 1):
    """Yield (token, line, column) for whitespace-separated tokens."""
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        yield text[i:j], line, col
        col += j - i
        i = j


def _parse_token(tok: str, line: int, col: int) -> Letter:
    exp = 1
    name = tok
    if tok.endswith("'"):
        name = tok[:-1]
        exp = -1
    if not _NAME_RE.fullmatch(name or "'"):
        raise WordSyntaxError(f"bad token {tok!r}", line, col)
    return Letter(name, exp)


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.split("\n"))


def _position(text: str, offset: int) -> tuple:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def parse_presentation(text: str) -> Presentation:
    src = _strip_comments(text)
    m = re.match(r"\s*gens\s*:", src)
    if not m:
        line, col = _position(src, len(src) - len(src.lstrip()))
        raise WordSyntaxError("expected 'gens:'", line, col)
    semi = src.find(";", m.end())
    if semi < 0:
        raise WordSyntaxError("expected ';' after generator list",
                              *_position(src, len(src)))
    gens_part = src[m.end():semi]
    m2 = re.compile(r"\s*rels\s*:").match(src, semi + 1)
    if not m2:
        raise WordSyntaxError("expected 'rels:'", *_position(src, semi + 1))

    gens = []
    line, col = _position(src, m.end())
    for tok, l, c in _tokens(gens_part.replace(",", " "), line, col):
        if not _NAME_RE.fullmatch(tok):
            raise WordSyntaxError(f"bad generator name {tok!r}", l, c)
        if tok in gens:
            raise WordSyntaxError(f"duplicate generator {tok!r}", l, c)
        gens.append(tok)
    known = set(gens)

    rels = []
    start = m2.end()
    body = src[start:]
    if body.strip():
        offset = start
        for chunk in body.split(","):
            stripped = re.sub(r"=\s*1\s*$", "", chunk.rstrip())
            line, col = _position(src, offset)
            letters = []
            for tok, l, c in _tokens(stripped, line, col):
                x = _parse_token(tok, l, c)
                if x.name not in known:
                    raise UndeclaredGeneratorError(x.name, l, c)
                letters.append(x)
            if not letters:
                raise WordSyntaxError("empty relator", line, col)
            rels.append(Word(letters))
            offset += len(chunk) + 1
    return Presentation(gens, rels)


def format_presentation(p: Presentation) -> str:
    rels = ", ".join(str(r) for r in p.relators)
    return f"gens: {' '.join(p.generators)} ; rels: {rels}".rstrip()


def proper_prefixes(p: Presentation) -> list:
    seen = set()
    out = []
    for r in p.relators:
        for k in range(1, len(r)):
            u = r[:k]
            if u not in seen:
                seen.add(u)
                out.append(u)
    return out
