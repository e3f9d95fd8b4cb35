import json

import pytest

from fundgpd.cli import main

from helpers import DATA


def run(*args):
    return main([str(a) for a in args])


def test_point(tmp_path):
    rep = tmp_path / "r.json"
    assert run("analyze", DATA / "point.poset", "--report", rep) == 0
    data = json.loads(rep.read_text())
    assert data["summary"]["pass"] and data["summary"]["arrows"] == 1 and data["summary"]["etale"]


def test_pseudocircle_exceeded(tmp_path):
    rep = tmp_path / "r.json"
    assert run("analyze", DATA / "pseudocircle.poset", "--report", rep) == 3
    data = json.loads(rep.read_text())
    assert data["status"] == "exceeded" and data["exceeded"]["h1"][0]["group"] == "Z"


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.poset"
    bad.write_text("a <\n")
    assert run("analyze", bad) == 4
    cyc = tmp_path / "cyc.poset"
    cyc.write_text("a < b\nb < a\n")
    assert run("analyze", cyc) == 4
    assert run("analyze", tmp_path / "missing.json") == 4
    assert run("analyze", DATA / "chain.poset", "--basepoint", "zz") == 4


@pytest.mark.parametrize("checks", ["axioms", "topology", "pointset"])
def test_check_selection(tmp_path, checks):
    rep = tmp_path / "r.json"
    assert run("analyze", DATA / "sphere.poset", "--checks", checks, "--report", rep) == 0
    data = json.loads(rep.read_text())
    assert ("axioms" in data["groupoid"]) == (checks == "axioms")
    assert ("topology" in data["groupoid"]) == (checks == "topology")


def test_disconnected_and_basepoint(tmp_path):
    rep = tmp_path / "r.json"
    assert run("analyze", DATA / "discrete.poset", "--basepoint", "q", "--report", rep) == 0
    data = json.loads(rep.read_text())
    assert [c["basepoint"] for c in data["components"]] == ["p", "q", "r"]
    assert data["summary"]["hausdorff"] and data["summary"]["etale"]


def test_small_cap_gives_exit_3():
    assert run("analyze", DATA / "rp2.json", "--max-cosets", "1") == 3


def test_check_iso(tmp_path, capsys):
    g, p = tmp_path / "g.json", tmp_path / "p.json"
    assert run("analyze", DATA / "chain.poset", "--export", g) == 0
    assert run("export-pair", DATA / "chain.poset", p) == 0
    capsys.readouterr()
    assert run("check-iso", g, g) == 0
    capsys.readouterr()
    assert run("check-iso", g, p) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["isomorphic"] and out["certificate"]["[a,b]"] == "(a,b)"
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"[a,a]": "(a,a)", "[a,b]": "(a,b)", "[b,a]": "(b,a)", "[b,b]": "(b,b)"}))
    assert run("check-iso", g, p, m) == 0
    m.write_text(json.dumps([0, 0, 0, 0]))
    assert run("check-iso", g, p, m) == 2
    s = tmp_path / "s.json"
    assert run("analyze", DATA / "sphere.poset", "--export", s) == 0
    assert run("check-iso", g, s) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": 9}')
    assert run("check-iso", bad, g) == 4
    assert run("check-iso", s, s, "--search-cap", "2") == 5


def test_circle_demo(tmp_path):
    assert run("circle-demo", "--samples", "1") == 0
    rep = tmp_path / "c.json"
    assert run("circle-demo", "--samples", "200", "--seed", "7", "--report", rep) == 0
    assert json.loads(rep.read_text())["pass"]
    assert run("circle-demo", "--samples", "0") == 2


def test_dot_export(tmp_path):
    dot = tmp_path / "g.dot"
    assert run("analyze", DATA / "chain.poset", "--dot", dot) == 0
    assert "←" in dot.read_text(encoding="utf-8")
