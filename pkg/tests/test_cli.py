import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from hornlogic import cli

SCHEMA = json.loads((Path(cli.__file__).parent / "schemas" / "solutions.schema.json").read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_run_true(capsys, it_kb_path):
    code, out, _ = run(capsys, "run", it_kb_path, "--query",
                       "?- request(computer, liquid, shuttered, L).")
    assert code == 0
    assert out == 'true\nL = "Please contact the hotline!"\n'


def test_run_false(capsys, it_kb_path):
    code, out, _ = run(capsys, "run", it_kb_path, "--query", "?- request(printer, computer, hot, L).")
    assert (code, out) == (1, "false\n")


def test_run_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.lkb"
    bad.write_text("p(X")
    code, out, err = run(capsys, "run", str(bad), "--query", "?- p.")
    assert code == 2
    assert err.startswith(f"{bad}:1:2: ")


def test_run_bad_query_and_missing_file(capsys, it_kb_path, tmp_path):
    assert run(capsys, "run", it_kb_path, "--query", "?- a, b.")[0] == 2
    assert run(capsys, "run", str(tmp_path / "nope.lkb"), "--query", "p.")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_run_depth_limit(capsys, tmp_path):
    kb = tmp_path / "loop.lkb"
    kb.write_text("loop :- loop, stop.")
    code, _, err = run(capsys, "--max-depth", "40", "run", str(kb), "--query", "loop.")
    assert code == 3 and "depth limit 40" in err
    code, _, _ = run(capsys, "run", str(kb), "--query", "loop.", "--max-depth", "40")
    assert code == 3


def test_run_multiple_solutions_and_limit(capsys, tmp_path):
    kb = tmp_path / "p.lkb"
    kb.write_text('p(a, 1). p(b, "two"). p(c, X).')
    code, out, _ = run(capsys, "run", str(kb), "--query", "p(N, V).")
    assert code == 0
    assert out == 'true\nN = a\nV = 1\n\nN = b\nV = "two"\n\nN = c\nV = _\n'
    code, out, _ = run(capsys, "run", str(kb), "--query", "p(N, V).", "--max-solutions", "1")
    assert out == "true\nN = a\nV = 1\n"


def test_run_json_matches_schema(capsys, tmp_path, it_kb_path):
    kb = tmp_path / "p.lkb"
    kb.write_text('p(a, 1, "t"). p(b, -4, X). e(X, X).')
    for path, q in ((str(kb), "p(A, B, C)."), (str(kb), "e(X, Y)."), (it_kb_path, "request(a, b, c, L)."),
                    (str(kb), "p(a, 1, \"t\").")):
        code, out, _ = run(capsys, "--json", "run", path, "--query", q)
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        assert doc["success"] == (code == 0)
    code, out, _ = run(capsys, "run", str(kb), "--query", "p(A, B, C).", "--json")
    assert json.loads(out)["solutions"][0] == {
        "A": {"kind": "symbol", "value": "a"}, "B": {"kind": "integer", "value": 1},
        "C": {"kind": "text", "value": "t"}}
    code, out, _ = run(capsys, "--json", "run", str(kb), "--query", "e(X, Y).")
    assert json.loads(out)["solutions"] == [{"X": {"kind": "variable", "name": "X"},
                                             "Y": {"kind": "variable", "name": "X"}}]


def test_repl(capsys, monkeypatch, it_kb_path):
    monkeypatch.setattr(sys, "stdin", io.StringIO(
        "request(crashed, hot, computer, L).\n\np(\nsolution(computer, X, Y, Z)\n:quit\nignored.\n"))
    code, out, _ = run(capsys, "repl", it_kb_path)
    assert code == 0
    lines = out.splitlines()
    assert lines[:2] == ["true", 'L = "Please contact the hotline!"']
    assert lines[2].startswith("error: 1:3")
    assert lines[3] == "true"
    assert "ignored" not in out


def test_repl_eof_exits_zero(capsys, monkeypatch, it_kb_path):
    monkeypatch.setattr(sys, "stdin", io.StringIO("?- solution(x, y, z, L).\n"))
    assert run(capsys, "repl", it_kb_path)[:2] == (0, "false\n")


@pytest.mark.parametrize("symptoms,expected", [
    (["fever", "snuff", "headache"], "cold,cold,influenza"),
    (["abdominal_pain", "sickness"], "gastrointestinal_disease,gastrointestinal_disease"),
])
def test_diagnose(capsys, medical_kb_path, symptoms, expected):
    code, out, _ = run(capsys, "diagnose", medical_kb_path, *symptoms)
    assert (code, out) == (0, expected + "\n")
    assert run(capsys, "diagnose", medical_kb_path, *symptoms)[1] == out


def test_diagnose_empty_and_missing_predicate(capsys, medical_kb_path, it_kb_path):
    assert run(capsys, "diagnose", medical_kb_path)[:2] == (1, "\n")
    assert run(capsys, "diagnose", it_kb_path, "a", "b")[:2] == (1, "\n")


def test_check(capsys, it_kb_path, tmp_path):
    assert run(capsys, "check", it_kb_path)[:2] == (0, "6 clauses, predicates: solution/4, request/4\n")
    empty = tmp_path / "empty.lkb"
    empty.write_text("")
    assert run(capsys, "check", str(empty))[:2] == (0, "0 clauses\n")
    bad = tmp_path / "bad.lkb"
    bad.write_text("p(a).\nq( .\nr(b).\ns :- t,.\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert [line.split(":")[1] for line in err.splitlines()] == ["2", "4"]


def test_metrics_halstead(capsys):
    code, out, _ = run(capsys, "metrics", "halstead", "--n1", "21", "--n2", "47", "--N1", "218", "--N2", "169")
    assert code == 0
    assert out.splitlines()[-1].endswith("D = 4941 s")
    code, out, _ = run(capsys, "metrics", "halstead", "--n1", "21", "--n2", "47", "--N1", "218",
                       "--N2", "169", "--json")
    assert json.loads(out)["rounded"]["U"] == 2356


def test_metrics_halstead_invalid(capsys):
    code, _, err = run(capsys, "metrics", "halstead", "--n1", "1", "--n2", "0", "--N1", "1", "--N2", "0")
    assert code == 3 and "n2" in err


def test_metrics_mccabe(capsys):
    assert run(capsys, "metrics", "mccabe", "--edges", "1", "--nodes", "2")[:2] == (0, "v(G) = 1\n")
    code, out, err = run(capsys, "metrics", "mccabe", "--edges", "0", "--nodes", "5")
    assert code == 0 and "warning" in err
    assert run(capsys, "metrics", "mccabe", "--edges", "1", "--nodes", "2", "--components", "0")[0] == 3


def test_metrics_quality(capsys, measurements_path, tmp_path):
    code, out, _ = run(capsys, "metrics", "quality", measurements_path)
    assert code == 0
    assert out.splitlines()[-1] == "Q_P: C#=1.49 Prolog=0.61 Logic#=0.90"
    code, out, _ = run(capsys, "--json", "metrics", "quality", measurements_path)
    assert json.loads(out)["approach_quality"]["Prolog"] == pytest.approx(0.6145, abs=1e-3)
    broken = tmp_path / "m.json"
    broken.write_text("{not json")
    assert run(capsys, "metrics", "quality", str(broken))[0] == 3
    broken.write_text(json.dumps({"metrics": {"U": "lower-is-better"},
                                  "artifacts": {"a": {"x": {"U": 1}, "y": {}}}}))
    code, _, err = run(capsys, "metrics", "quality", str(broken))
    assert code == 3 and "a/y/U" in err


def test_module_entry_point(it_kb_path):
    proc = subprocess.run([sys.executable, "-m", "hornlogic", "check", it_kb_path],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("6 clauses")


def test_exit_status_matrix(capsys, it_kb_path, medical_kb_path):
    cases = [
        (it_kb_path, "request(computer, liquid, shuttered, L).", 0),
        (it_kb_path, "request(crashed, hot, computer, L).", 0),
        (it_kb_path, "request(printer, computer, hot, L).", 1),
        (medical_kb_path, "diagnosis(snuff, headache, D).", 0),
        (medical_kb_path, "diagnosis(fever, fever, D).", 1),
    ]
    for path, q, expected in cases:
        assert run(capsys, "run", path, "--query", q)[0] == expected
