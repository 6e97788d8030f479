import json

import pytest

from trunctilt import data_path
from trunctilt.cli import COMMANDS, main

Q91 = data_path("example91.quiver")
Q92 = data_path("lambda2.quiver")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_all_subcommands_registered():
    assert set(COMMANDS) == {
        "classify", "algebra-info", "module-info", "skeleton", "syzygy", "pdim", "approx", "findim",
        "tilt", "verify-tilting", "strong-right", "stratify", "endo", "relations", "separation",
        "dualize", "report", "selftest"}


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", Q91)
    assert code == 0
    assert out.splitlines()[0] == "precyclic: 2 3; non-precyclic: 4 5 6; precyclic sources: none"


def test_pdim_simple4(capsys):
    code, out, _ = run(capsys, "pdim", Q91, "--simple", "4")
    assert (code, out) == (0, "1\n")


def test_pdim_infinite(capsys):
    code, out, _ = run(capsys, "pdim", Q91, "--simple", "2", "--check")
    assert (code, out) == (0, "inf\n")


@pytest.mark.parametrize("argv", [
    ["algebra-info", Q91],
    ["module-info", Q91, "--B", "5"],
    ["skeleton", Q91, "--projective", "2"],
    ["syzygy", Q91, "--injective", "6", "--steps", "3"],
    ["approx", Q91, "--simple", "3"],
    ["findim", Q91],
    ["tilt", Q91],
    ["verify-tilting", Q91],
    ["strong-right", Q91],
    ["stratify", Q91],
    ["endo", Q91],
    ["relations", data_path("example25.quiver")],
    ["separation", Q91],
    ["dualize", Q91, "--T", "4"],
    ["selftest", "--count", "10", "--algebras", "2"],
])
def test_subcommands_succeed(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    assert out


@pytest.mark.parametrize("fmt", ["json", "dot"])
def test_formats(capsys, fmt):
    code, out, _ = run(capsys, "tilt", Q91, "--format", fmt)
    assert code == 0
    if fmt == "json":
        data = json.loads(out)
        assert [s["dim"] for s in data["summands"]] == [3, 3, 4, 5, 6]
    else:
        assert out.count("digraph") == 5


def test_deterministic(capsys):
    a = run(capsys, "report", Q91, "--format", "json")
    b = run(capsys, "report", Q91, "--format", "json")
    assert a == b and a[0] == 0
    c = run(capsys, "selftest", "--count", "8", "--algebras", "2", "--seed", "4")
    d = run(capsys, "selftest", "--count", "8", "--algebras", "2", "--seed", "4")
    assert c == d


def test_report_figures(capsys, tmp_path):
    code, out, _ = run(capsys, "report", Q91, "--figures", tmp_path)
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["endo_projectives.png", "pdims.png", "quivers.png", "tilting_forest.png"]
    assert all(p.read_bytes()[:4] == b"\x89PNG" for p in tmp_path.iterdir())
    assert "chain of equalities holds: True" in out


def test_report_example92(capsys):
    code, out, _ = run(capsys, "report", Q92)
    assert code == 0
    assert "strong on the right: False" in out
    assert "note:" in out


def test_endo_compare(capsys):
    code, out, _ = run(capsys, "endo", Q91, "--compare", data_path("example25_corrected.quiver"))
    assert code == 0 and "ideals equal: yes" in out
    code, out, err = run(capsys, "endo", Q91, "--compare", data_path("example25.quiver"))
    assert code == 1
    assert "delta*tau: NOT in computed ideal" in out
    assert "check failed" in err


def test_endo_save_and_relations(capsys, tmp_path):
    path = tmp_path / "E.json"
    code, _, _ = run(capsys, "endo", Q91, "--save-algebra", path)
    assert code == 0
    code, out, _ = run(capsys, "relations", path)
    assert code == 0
    assert "dim = 31, Loewy length 5" in out


def test_relations_truncated(capsys):
    code, out, _ = run(capsys, "relations", Q91)
    assert code == 0 and out.startswith("truncated path algebra: yes, t = 3")


def test_module_file(capsys, tmp_path):
    f = tmp_path / "m.mod"
    f.write_text("slots: [2, 3]\nrelation: (d*a@0) - (d@1)\n")
    code, out, _ = run(capsys, "module-info", Q91, "--module", f)
    assert code == 0 and "pdim:" in out


def test_verify_candidate_failure(capsys, tmp_path):
    f = tmp_path / "s2.mod"
    f.write_text("rep:\n  dim 2: 1\n")
    code, out, err = run(capsys, "verify-tilting", Q91, "--summand", f)
    assert code == 1 and "infinite" in err


@pytest.mark.parametrize("argv,msg", [
    (["classify", "/nonexistent.quiver"], "cannot read"),
    (["pdim", Q91], "choose a module"),
    (["pdim", Q91, "--simple", "9"], "unknown vertex"),
    (["pdim", Q91, "--simple", "4", "--T", "4"], "exactly one"),
    (["tilt", data_path("example52.quiver")], "truncated path algebra"),
    (["findim", Q91, "--field", "zp:4"], ""),
])
def test_usage_errors(capsys, argv, msg):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert msg in err


def test_parse_error_location(capsys, tmp_path):
    f = tmp_path / "bad.quiver"
    f.write_text("vertices: 1 2\narrow a 1 -> 2\n")
    code, _, err = run(capsys, "classify", f)
    assert code == 2 and "line 2" in err


def test_argparse_usage_error(capsys):
    assert main(["frobnicate"]) == 2


def test_prime_field(capsys):
    code, out, _ = run(capsys, "endo", Q91, "--field", "zp:7")
    assert code == 0 and "dim End(T) = 31" in out
