"""Membership of words in the Green's classes of the identity.

All answers come from a finite approximation of the Schützenberger graph of
the empty word, so they are ``yes`` with a witness or ``unknown``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .stephen import UNKNOWN, YES, Certificate, Source, approximate
from .words import Letter, Presentation, Word, WordLike, as_word, invert


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class ClassificationResult:
    cls: str
    verdict: Certificate
    witness: Any = None

    @property
    def yes(self) -> bool:
        return self.verdict.yes

    def to_dict(self) -> dict:
        return {"class": self.cls, "verdict": self.verdict.verdict,
                "rounds": self.verdict.rounds, "witness": self.witness}


def _identity_graph(p: Presentation, rounds: int, source: Source):
    return source(p, Word(), rounds).graph


def _result(cls, ok, rounds, witness=None):
    return ClassificationResult(cls, Certificate(YES if ok else UNKNOWN, rounds, witness),
                                witness if ok else None)


def is_right_unit(p: Presentation, w: WordLike, rounds: int,
                  source: Source = approximate) -> ClassificationResult:
    w = p.check_word(as_word(w))
    g = _identity_graph(p, rounds, source)
    end = g.read(g.root, w)
    return _result("R1", end is not None, rounds, {"endpoint": end})


def is_left_unit(p: Presentation, w: WordLike, rounds: int,
                 source: Source = approximate) -> ClassificationResult:
    w = p.check_word(as_word(w))
    g = _identity_graph(p, rounds, source)
    start = g.read(g.root, invert(w))
    return _result("L1", start is not None, rounds, {"start": start})


def is_unit(p: Presentation, w: WordLike, rounds: int,
            source: Source = approximate) -> ClassificationResult:
    r = is_right_unit(p, w, rounds, source)
    left = is_left_unit(p, w, rounds, source)
    ok = r.yes and left.yes
    return _result("H1", ok, rounds, {"endpoint": r.witness and r.witness["endpoint"],
                                      "start": left.witness and left.witness["start"]})


def in_J1(p: Presentation, w: WordLike, rounds: int,
          source: Source = approximate) -> ClassificationResult:
    w = p.check_word(as_word(w))
    g = _identity_graph(p, rounds, source)
    for s in range(g.n):
        if g.read(s, w) is not None:
            return _result("J1", True, rounds, {"path_start": s})
    return _result("J1", False, rounds)


def _split_search(g, w: Word):
    for i in range(len(w) + 1):
        if g.read(g.root, invert(w[:i])) is not None and g.read(g.root, w[i:]) is not None:
            return i
    return None


def _through_root(g, w: Word):
    """A start vertex from which ``w`` reads along a path visiting the root."""
    for s in range(g.n):
        path = g.trajectory(s, w)
        if path is not None and g.root in path:
            return s, path.index(g.root)
    return None


def in_D1(p: Presentation, w: WordLike, rounds: int,
          source: Source = approximate) -> ClassificationResult:
    w = p.check_word(as_word(w))
    g = _identity_graph(p, rounds, source)
    split = _split_search(g, w)
    path = _through_root(g, w)
    if (split is None) != (path is None):
        raise InvariantViolation(
            f"split search and through-root scan disagree on {w}: {split} vs {path}")
    if split is None:
        return _result("D1", False, rounds)
    start, pos = path
    return _result("D1", True, rounds, {
        "split": split, "left": str(w[:split]), "right": str(w[split:]),
        "path_start": start, "root_position": pos})


def generator_dichotomy(p: Presentation, gen, rounds: int,
                        source: Source = approximate) -> dict:
    if isinstance(gen, Letter):
        gen = gen.name
    if gen not in p.generators:
        raise ValueError(f"{gen!r} is not a generator")
    w = Word([Letter(gen)])
    r = is_right_unit(p, w, rounds, source)
    left = is_left_unit(p, w, rounds, source)
    d = in_D1(p, w, rounds, source)
    if d.yes and not (r.yes or left.yes):
        raise InvariantViolation(f"generator {gen} in D1 but neither one-sided unit")
    return {"generator": gen, "right_unit": r.verdict.verdict,
            "left_unit": left.verdict.verdict, "in_D1": d.verdict.verdict,
            "rounds": rounds}


def classify(p: Presentation, w: WordLike, rounds: int,
             source: Source = approximate) -> dict:
    return {
        "R1": is_right_unit(p, w, rounds, source),
        "L1": is_left_unit(p, w, rounds, source),
        "H1": is_unit(p, w, rounds, source),
        "D1": in_D1(p, w, rounds, source),
        "J1": in_J1(p, w, rounds, source),
    }
