"""On-disk cache of approximations keyed by (presentation, word, rounds)."""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
import warnings
from typing import Optional

from .igraph import GraphFormatError, graph_from_dict, graph_to_dict
from .stephen import DEFAULT_VERTEX_CAP, Approximation, approximate, refine
from .words import Presentation, Word, as_word

CACHE_ENV = "INVMON_CACHE_DIR"
FORMAT_VERSION = 1


class CacheWarning(UserWarning):
    pass


def _stem(p: Presentation, w: Word) -> str:
    wh = hashlib.sha256(str(w).encode()).hexdigest()[:20]
    return f"{p.digest()[:32]}-{wh}"


def _path(cache_dir: str, p: Presentation, w: Word, rounds: int) -> str:
    return os.path.join(cache_dir, f"{_stem(p, w)}-r{rounds}.json")


def cache_put(cache_dir: str, a: Approximation) -> str:
    os.makedirs(cache_dir, exist_ok=True)
    path = _path(cache_dir, a.presentation, a.word, a.rounds)
    data = {"format": FORMAT_VERSION, "presentation": a.presentation.digest(),
            "word": str(a.word), "rounds": a.rounds, "graph": graph_to_dict(a.graph)}
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _load(path: str, p: Presentation, w: Word, rounds: int) -> Optional[Approximation]:
    try:
        with open(path) as fh:
            data = json.load(fh)
        if (data.get("format") != FORMAT_VERSION or data.get("presentation") != p.digest()
                or data.get("word") != str(w) or data.get("rounds") != rounds):
            raise GraphFormatError("cache entry does not match its key")
        g = graph_from_dict(data["graph"])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        warnings.warn(f"evicting corrupt cache entry {path}: {exc}", CacheWarning)
        try:
            os.unlink(path)
        except OSError:
            pass
        return None
    return Approximation(p, w, g, rounds)


def cache_get(cache_dir: str, p: Presentation, w, rounds: int):
    """Return ``(approximation, remaining_rounds)`` for the largest stored
    budget not exceeding ``rounds``, or ``(None, rounds)`` on a miss."""
    w = as_word(w)
    if not os.path.isdir(cache_dir):
        return None, rounds
    stem = _stem(p, w)
    pat = re.compile(re.escape(stem) + r"-r(\d+)\.json$")
    budgets = sorted((int(m.group(1)) for m in map(pat.match, os.listdir(cache_dir)) if m),
                     reverse=True)
    for k in budgets:
        if k > rounds:
            continue
        a = _load(os.path.join(cache_dir, f"{stem}-r{k}.json"), p, w, k)
        if a is not None:
            return a, rounds - k
    return None, rounds


def caching_source(cache_dir: Optional[str], max_vertices: int = DEFAULT_VERTEX_CAP):
    """An ``approximate`` replacement backed by memory and, if given, disk."""
    memo = {}

    def src(p: Presentation, w, rounds: int) -> Approximation:
        w = as_word(w)
        key = (p, w, rounds)
        if key in memo:
            return memo[key]
        a = None
        remaining = rounds
        if cache_dir:
            a, remaining = cache_get(cache_dir, p, w, rounds)
        if a is None:
            a = approximate(p, w, rounds, max_vertices)
        else:
            a.max_vertices = max_vertices
            a = refine(a, remaining)
        if cache_dir and remaining:
            cache_put(cache_dir, a)
        memo[key] = a
        return a

    return src
