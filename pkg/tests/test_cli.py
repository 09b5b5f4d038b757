import json
import os
import subprocess
import sys

import pytest

from invmon.cache import CacheWarning, cache_get, cache_put, caching_source
from invmon.cli import main
from invmon.igraph import canonical_form
from invmon.stephen import approximate
from invmon.words import parse_presentation

from conftest import DATA, FIG1, FIG2, pres


def run_cli(tmp_path, *args, name="report.json"):
    out = tmp_path / name
    code = main([*args, "--report", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_cache_put_get_round_trip(tmp_path):
    p = pres(FIG1)
    a = approximate(p, "a c", 2)
    cache_put(str(tmp_path), a)
    b, remaining = cache_get(str(tmp_path), p, "a c", 2)
    assert remaining == 0
    assert canonical_form(b.graph) == canonical_form(a.graph)


def test_cache_larger_budget_hint(tmp_path):
    p = pres(FIG2)
    cache_put(str(tmp_path), approximate(p, "", 1))
    cache_put(str(tmp_path), approximate(p, "", 2))
    b, remaining = cache_get(str(tmp_path), p, "", 5)
    assert b.rounds == 2 and remaining == 3
    b, remaining = cache_get(str(tmp_path), p, "", 1)
    assert b.rounds == 1 and remaining == 0
    assert cache_get(str(tmp_path), p, "", 0) == (None, 0)


def test_cache_miss_after_presentation_edit(tmp_path):
    p = pres(FIG2)
    cache_put(str(tmp_path), approximate(p, "", 2))
    q = parse_presentation("gens: x y ; rels: x y y x'")
    assert cache_get(str(tmp_path), q, "", 2) == (None, 2)
    assert cache_get(str(tmp_path), p, "x", 2) == (None, 2)


def test_corrupt_entry_evicted(tmp_path):
    p = pres(FIG2)
    path = cache_put(str(tmp_path), approximate(p, "", 2))
    with open(path, "w") as fh:
        fh.write("{not json")
    with pytest.warns(CacheWarning):
        assert cache_get(str(tmp_path), p, "", 2) == (None, 2)
    assert not os.path.exists(path)


def test_caching_source_refines_and_stores(tmp_path):
    p = pres(FIG2)
    src = caching_source(str(tmp_path))
    a = src(p, "", 2)
    b = caching_source(str(tmp_path))(p, "", 4)
    assert canonical_form(b.graph) == canonical_form(approximate(p, "", 4).graph)
    assert a.rounds == 2 and len(os.listdir(tmp_path)) == 2


def test_sgraph_report_and_dot(tmp_path):
    dot = tmp_path / "out.dot"
    code, rep = run_cli(tmp_path, "sgraph", "--pres", "fig2.simp", "--word", "",
                        "--rounds", "3", "--dot", str(dot))
    assert code == 0 and rep["schema_version"] == 1 and rep["vertices"] == 4
    assert dot.read_text().startswith("digraph")


def test_roi_exit_codes(tmp_path):
    code, rep = run_cli(tmp_path, "roi", "--pres", "fig1.simp", "--hom", "fig1-hom.json",
                        "--rounds", "4")
    assert code == 2 and rep["roi"]["result"] == "candidate_witness"
    assert sorted(rep["roi"]["witness"])[0][-1] in "cd"
    code, rep = run_cli(tmp_path, "roi", "--pres", "acb-adb.simp", "--hom",
                        "acb-adb-hom.json", "--rounds", "3", name="b.json")
    assert code == 0 and rep["roi"]["result"] == "injective_up_to"


def test_equal_and_idempotent(tmp_path):
    code, rep = run_cli(tmp_path, "equal", "--pres", "acb-adb.simp", "--word", "a c",
                        "--other", "a d", "--rounds", "2")
    assert code == 0 and rep["equal"]["verdict"] == "yes"
    code, rep = run_cli(tmp_path, "equal", "--pres", "fig1.simp", "--word", "c",
                        "--other", "d", "--rounds", "2", name="b.json")
    assert code == 2 and rep["equal"]["verdict"] == "unknown"
    code, rep = run_cli(tmp_path, "idempotent", "--pres", "fig2.simp", "--word", "y",
                        "--rounds", "2", name="c.json")
    assert code == 2 and rep["idempotent"]["verdict"] == "unknown"


def test_unknown_never_rendered_as_false(tmp_path):
    code, rep = run_cli(tmp_path, "classify", "--pres", "xpy.simp", "--word", "x y",
                        "--rounds", "2")
    text = json.dumps(rep)
    assert "false" not in json.dumps(rep["classes"])
    assert {c["verdict"] for c in rep["classes"].values()} <= {"yes", "unknown"}
    assert code == 2 and '"unknown"' in text


def test_blocks_and_subgroup_word(tmp_path):
    code, rep = run_cli(tmp_path, "blocks", "--pres", "xpqy.simp", "--word",
                        "q q' x y q q'", "--rounds", "2")
    assert code == 0 and len(rep["cover"]["blocks"]) == 4
    code, rep = run_cli(tmp_path, "subgroup-word", "--pres", "aa.simp", "--unit", "",
                        "--unit", "a", "--gen", "v", "--rounds", "2", name="b.json")
    assert code == 0 and rep["subgroup_word"]["word"] == "v v' a v v' a'"


def test_synth_writes_files(tmp_path):
    pp, hp = tmp_path / "z2.simp", tmp_path / "z2-hom.json"
    code, rep = run_cli(tmp_path, "synth", "--group", "z2.json", "--rounds", "2",
                        "--out-pres", str(pp), "--out-hom", str(hp))
    assert code == 0 and rep["checks"]["ok"]
    p = parse_presentation(pp.read_text())
    assert len(p.relators) == 2
    assert json.loads(hp.read_text())["oracle"]["type"] == "free_product"


def test_errors_exit_one(tmp_path, capsys):
    assert main(["sgraph", "--pres", str(tmp_path / "nope.simp")]) == 1
    assert "no such file" in capsys.readouterr().err
    bad = tmp_path / "bad.simp"
    bad.write_text("gens: a ; rels: b")
    assert main(["sgraph", "--pres", str(bad)]) == 1
    assert main(["sgraph", "--pres", "fig1.simp", "--rounds", "6",
                 "--max-vertices", "20"]) == 1
    assert main(["sgraph", "--pres", "fig1.simp", "--rounds", "-1"]) == 1
    assert main(["sgraph", "--pres", "fig1.simp", "--word", "z"]) == 1


def test_module_entry_point(tmp_path):
    env = dict(os.environ)
    env.pop("INVMON_CACHE_DIR", None)
    r = subprocess.run([sys.executable, "-m", "invmon", "sgraph", "--pres",
                        os.path.join(DATA, "fig2.simp"), "--rounds", "2"],
                       capture_output=True, text=True, env=env)
    assert r.returncode == 0
    assert json.loads(r.stdout)["vertices"] == 3


def test_cold_and_warm_cache_identical(tmp_path, monkeypatch):
    monkeypatch.setenv("INVMON_CACHE_DIR", str(tmp_path / "cache"))
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert main(["sgraph", "--pres", "fig1.simp", "--word", "a c", "--rounds", "3",
                     "--report", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert os.listdir(tmp_path / "cache")
