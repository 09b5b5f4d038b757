"""Command-line driver.

Every subcommand writes one JSON report (to ``--report`` or stdout).  Exit
status: 0 on success, 2 when the answer is mostly ``unknown`` or only a
candidate witness, 1 on errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import blocks as blk
from . import gimage, green, stephen, synth
from .cache import CACHE_ENV, caching_source
from .folding import BACKEND
from .igraph import (GraphFormatError, canonical_form, export_dot, graph_to_dict,
                     import_json)
from .words import (UndeclaredGeneratorError, Word, WordSyntaxError, format_presentation,
                    parse_presentation)

SCHEMA_VERSION = 1
DATA_DIR = os.path.join(os.path.dirname(__file__), "data")

log = logging.getLogger("invmon")


@dataclass
class RunConfig:
    command: str
    presentation: Optional[str] = None
    word: str = ""
    other: Optional[str] = None
    rounds: int = 3
    max_vertices: int = stephen.DEFAULT_VERTEX_CAP
    hom: Optional[str] = None
    model: Optional[str] = None
    group: Optional[str] = None
    units: list = field(default_factory=list)
    generator: Optional[str] = None
    report: Optional[str] = None
    dot: Optional[str] = None
    out_pres: Optional[str] = None
    out_hom: Optional[str] = None
    cache_dir: Optional[str] = None

    def validate(self) -> None:
        if self.rounds < 0:
            raise ValueError("rounds must be non-negative")
        if self.max_vertices < 1:
            raise ValueError("vertex cap must be positive")


def resolve(path: str) -> str:
    """A path as given, or else the bundled data file of that name."""
    if os.path.exists(path):
        return path
    bundled = os.path.join(DATA_DIR, os.path.basename(path))
    if os.path.exists(bundled):
        return bundled
    raise FileNotFoundError(f"no such file: {path}")


def load_presentation(path: str):
    with open(resolve(path)) as fh:
        return parse_presentation(fh.read())


def load_group(spec: str) -> gimage.FiniteGroupTable:
    try:
        return gimage.FiniteGroupTable.load(resolve(spec))
    except FileNotFoundError:
        m = re.fullmatch(r"([ZS])(\d+)", spec)
        if not m:
            raise
        n = int(m.group(2))
        return gimage.cyclic_group(n) if m.group(1) == "Z" else gimage.symmetric_group(n)


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _tally(verdicts) -> int:
    yes = sum(1 for v in verdicts if v == stephen.YES)
    return 2 if len(verdicts) - yes > yes else 0


def cmd_sgraph(cfg, p, src):
    a = src(p, Word.parse(cfg.word), cfg.rounds)
    g = a.graph
    if cfg.dot:
        _write(cfg.dot, export_dot(g))
    return {"word": cfg.word, "rounds": cfg.rounds, "vertices": g.n,
            "edges": g.num_edges, "graph": graph_to_dict(g),
            "canonical_sha256": hashlib.sha256(canonical_form(g)).hexdigest()}, 0


def cmd_classify(cfg, p, src):
    res = green.classify(p, cfg.word, cfg.rounds, src)
    out = {k: r.to_dict() for k, r in res.items()}
    return {"word": cfg.word, "rounds": cfg.rounds, "classes": out}, \
        _tally([r.verdict.verdict for r in res.values()])


def cmd_equal(cfg, p, src):
    c = stephen.equals_in_monoid(p, cfg.word, cfg.other, cfg.rounds, src)
    out = {"u": cfg.word, "v": cfg.other, "rounds": cfg.rounds, "equal": c.to_dict()}
    code = 0 if c.yes else 2
    if cfg.model:
        with open(resolve(cfg.model)) as fh:
            model = import_json(fh.read())
        sep = gimage.separate_by_model(p, model, cfg.word, cfg.other)
        out["separation"] = sep.to_dict()
        if sep.distinct:
            code = 0
    return out, code


def cmd_idempotent(cfg, p, src):
    c = stephen.is_idempotent(p, cfg.word, cfg.rounds, src)
    return {"word": cfg.word, "rounds": cfg.rounds, "idempotent": c.to_dict()}, \
        0 if c.yes else 2


def cmd_roi(cfg, p, src):
    if not cfg.hom:
        raise ValueError("roi needs --hom")
    h = gimage.load_hom(resolve(cfg.hom), p)
    rep = gimage.roi_check(p, h, cfg.rounds, src)
    return {"rounds": cfg.rounds, "roi": rep.to_dict()}, 0 if rep.injective else 2


def cmd_blocks(cfg, p, src):
    cover = blk.lambda_cover(p, cfg.word, cfg.rounds, src, cfg.max_vertices)
    laws = blk.verify_cover_laws(cover)
    action = blk.block_action(cover)
    if cfg.dot:
        _write(cfg.dot, blk.export_cover_dot(cover))
    return {"word": cfg.word, "rounds": cfg.rounds, "cover": cover.to_dict(),
            "laws": laws, "action": action.to_dict(),
            "disjointness": blk.disjointness_report(cover, action.order)}, 0


def cmd_synth(cfg, p, src):
    if not cfg.group:
        raise ValueError("synth needs --group")
    g = load_group(cfg.group)
    s = synth.synthesize(g)
    text = format_presentation(s.presentation) + "\n"
    hom_text = json.dumps(s.hom.to_dict(), sort_keys=True, indent=2) + "\n"
    if cfg.out_pres:
        _write(cfg.out_pres, text)
    if cfg.out_hom:
        _write(cfg.out_hom, hom_text)
    checks = synth.verify_synthesis(s, cfg.rounds, src)
    return {"group": g.to_dict(), "rounds": cfg.rounds,
            "presentation": text.strip(), "presentation_sha256": _digest(text),
            "hom_sha256": _digest(hom_text), "witness": str(s.witness),
            "checks": checks}, 0 if checks["ok"] else 1


def cmd_subgroup_word(cfg, p, src):
    if not cfg.generator:
        raise ValueError("subgroup-word needs --gen")
    w, rep = synth.finite_subgroup_word(p, cfg.units or [""], cfg.generator,
                                        cfg.rounds, src)
    return {"rounds": cfg.rounds, "subgroup_word": rep}, 0


COMMANDS = {
    "sgraph": cmd_sgraph, "classify": cmd_classify, "equal": cmd_equal,
    "idempotent": cmd_idempotent, "roi": cmd_roi, "blocks": cmd_blocks,
    "synth": cmd_synth, "subgroup-word": cmd_subgroup_word,
}


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        p = None
        if cfg.command != "synth":
            if not cfg.presentation:
                raise ValueError(f"{cfg.command} needs --pres")
            p = load_presentation(cfg.presentation)
        cache_dir = cfg.cache_dir or os.environ.get(CACHE_ENV) or None
        src = caching_source(cache_dir, cfg.max_vertices)
        log.info("running %s (fold backend %s)", cfg.command, BACKEND)
        body, code = COMMANDS[cfg.command](cfg, p, src)
    except (WordSyntaxError, UndeclaredGeneratorError, GraphFormatError,
            gimage.GroupFormatError, gimage.InadmissibleHomError,
            gimage.InadmissibleModelError, synth.UnitCertificationError,
            stephen.ResourceLimitError, green.InvariantViolation,
            synth.SynthesisError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = {"schema_version": SCHEMA_VERSION, "command": cfg.command}
    if p is not None:
        report["presentation"] = format_presentation(p)
    report.update(body)
    _write(cfg.report, json.dumps(report, sort_keys=True, indent=2) + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="invmon",
                                 description="Computations in special inverse monoids.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, pres=True, word=False):
        if pres:
            sp.add_argument("--pres", required=True, help="presentation file")
        if word:
            sp.add_argument("--word", default="", help="word, e.g. \"a c b'\"")
        sp.add_argument("--rounds", type=int, default=3)
        sp.add_argument("--max-vertices", type=int, default=stephen.DEFAULT_VERTEX_CAP)
        sp.add_argument("--report", help="write the JSON report here instead of stdout")
        sp.add_argument("--cache-dir", help=f"approximation cache (default ${CACHE_ENV})")
        return sp

    common(sub.add_parser("sgraph", help="approximate a Schützenberger graph"),
           word=True).add_argument("--dot")
    common(sub.add_parser("classify", help="Green's class verdicts"), word=True)
    sp = common(sub.add_parser("equal", help="certify u = v"), word=True)
    sp.add_argument("--other", required=True)
    sp.add_argument("--model", help="graph JSON used to try to separate the words")
    common(sub.add_parser("idempotent", help="certify w is idempotent"), word=True)
    common(sub.add_parser("roi", help="injectivity on right units")).add_argument(
        "--hom", required=True)
    common(sub.add_parser("blocks", help="block cover and its symmetry"),
           word=True).add_argument("--dot")
    sp = common(sub.add_parser("synth", help="build and verify a synthesized presentation"),
                pres=False)
    sp.add_argument("--group", required=True, help="group table JSON or Z<n>/S<n>")
    sp.add_argument("--out-pres")
    sp.add_argument("--out-hom")
    sp = common(sub.add_parser("subgroup-word", help="word with a prescribed subgroup"))
    sp.add_argument("--unit", action="append", dest="units", default=[])
    sp.add_argument("--gen", required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    cfg = RunConfig(
        command=args.command, presentation=getattr(args, "pres", None),
        word=getattr(args, "word", ""), other=getattr(args, "other", None),
        rounds=args.rounds, max_vertices=args.max_vertices,
        hom=getattr(args, "hom", None), model=getattr(args, "model", None),
        group=getattr(args, "group", None), units=getattr(args, "units", []),
        generator=getattr(args, "gen", None), report=args.report,
        dot=getattr(args, "dot", None), out_pres=getattr(args, "out_pres", None),
        out_hom=getattr(args, "out_hom", None), cache_dir=args.cache_dir)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
