from __future__ import annotations

import json

import pytest

from rlocality import catalog
from rlocality.algebra import goedel_chain
from rlocality.cli import INPUT_ERROR, OK, VIOLATION, main
from rlocality.documents import dumps


@pytest.fixture
def pair_files(tmp_path):
    pair = catalog.two_point_asymmetry()
    m, n = tmp_path / "m.json", tmp_path / "n.json"
    m.write_text(dumps(pair.m.to_document()))
    n.write_text(dumps(pair.n.to_document()))
    return str(m), str(n)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_builtin(capsys):
    code, out, _ = run(capsys, "validate-algebra", "lukasiewicz:3")
    assert code == OK
    assert "co_atom: 1/2" in out


def test_validate_reports_violation(tmp_path, capsys):
    doc = goedel_chain(3).to_document()
    doc["fuse"][0][1] = 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "--format", "json", "validate-algebra", str(path))
    assert code == VIOLATION
    assert json.loads(out)["valid"] is False


def test_eval(pair_files, capsys):
    m, _ = pair_files
    code, out, _ = run(capsys, "eval", "--model", m, "--formula", "forall x forall y (E(x, y) \\ E(y, x))")
    assert code == OK
    assert out.splitlines()[0] == "value: 1"
    code, out, _ = run(capsys, "eval", "--model", m, "--formula", "E(x, y) \\ @1/2", "--env", "x=s,y=t")
    assert code == OK and "value: 1" in out


def test_syntax_error_shows_caret(pair_files, capsys):
    m, _ = pair_files
    code, _, err = run(capsys, "eval", "--model", m, "--formula", "E(x, y")
    assert code == INPUT_ERROR
    lines = err.splitlines()
    assert lines[-1].strip() == "^"
    assert lines[-1].index("^") - 2 == len("E(x, y")


def test_missing_file_is_input_error(capsys):
    code, _, err = run(capsys, "eval", "--model", "/nonexistent.json", "--formula", "1")
    assert code == INPUT_ERROR and err.startswith("error:")


def test_equiv_json(pair_files, capsys):
    m, n = pair_files
    code, out, _ = run(capsys, "--format", "json", "equiv", "--m", m, "--n", n, "--k", "2")
    doc = json.loads(out)
    assert code == OK and doc["result"] is False and doc["status"] == 0
    code, out, _ = run(capsys, "--format", "json", "equiv", "--m", m, "--n", m, "--k", "1", "--system")
    assert "system" in json.loads(out)


def test_format_from_environment(pair_files, capsys, monkeypatch):
    m, n = pair_files
    monkeypatch.setenv("RLOCALITY_FORMAT", "json")
    code, out, _ = run(capsys, "swap", "--m", m, "--n", n, "--radius", "1")
    assert code == OK and json.loads(out)["related"] is False


def test_hanf_override(pair_files, capsys):
    m, n = pair_files
    code, _, err = run(capsys, "hanf", "--m", m, "--n", n, "--k", "2", "--metric", "models")
    assert code == INPUT_ERROR and "override" in err
    with pytest.warns(UserWarning, match="out of contract"):
        code, out, _ = run(capsys, "hanf", "--m", m, "--n", n, "--k", "2", "--metric", "models", "--override")
    assert code == OK and out.splitlines()[-1] == "premise: true"


def test_isotype_and_spheres(pair_files, capsys):
    m, n = pair_files
    code, out, _ = run(capsys, "isotype", "--model", m, "--k", "1", "--anchor", "s")
    assert code == OK and out.startswith("quantifier depth: 1")
    code, out, _ = run(capsys, "spheres", "--model", m, "--model", n, "--radius", "1")
    assert code == OK and "sphere types:" in out


def test_theta_and_relativize(capsys):
    code, out, _ = run(capsys, "theta", "--signature", "E:2", "--radius", "0")
    assert code == OK and out.strip() == "x = y"
    code, out, _ = run(capsys, "theta", "--signature", "Q:0", "--radius", "1")
    assert out.strip() == "none"
    code, out, _ = run(capsys, "relativize", "--signature", "E:2", "--algebra", "goedel:3",
                       "--radius", "1", "--formula", "exists y E(x, y)")
    assert code == OK and out.startswith("prenex: exists y E(x,y)")


def test_distinguish(pair_files, capsys):
    m, n = pair_files
    code, out, _ = run(capsys, "distinguish", "--m", m, "--n", n, "--radius", "1", "--rank", "1")
    assert code == OK and "none" not in out.splitlines()[0]


def test_query_locality_needs_seed(pair_files, capsys):
    m, _ = pair_files
    code, _, err = run(capsys, "query", "--model", m, "--query", "bot_connectivity", "--locality", "hanf")
    assert code == INPUT_ERROR and "--seed" in err


def test_seeded_query_runs_are_repeatable(tmp_path, capsys):
    m, _ = catalog.threshold_chain(1)
    path = tmp_path / "chain.json"
    path.write_text(dumps(m.to_document()))
    argv = ["--format", "json", "query", "--model", str(path), "--query", "t_transitive_closure:1/2",
            "--locality", "gaifman", "--metric", "ge:1/2", "--seed", "1", "--trials", "3"]
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first
    doc = json.loads(first[1])
    assert doc["locality"]["seeds"] == [1, 2, 3]
    assert first[0] == (VIOLATION if doc["locality"]["violations"] else OK)
    code, out, _ = run(capsys, "query", "--model", str(path), "--query", "t_transitive_closure:1/2")
    assert code == OK and out.startswith("t_transitive_closure(1/2): ")


def test_bad_arguments_exit_with_input_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["equiv"])
    assert info.value.code == INPUT_ERROR
    capsys.readouterr()


@pytest.mark.parametrize("example", ["two-point-asymmetry", "cycle-connectivity", "chain-transitive-closure"])
def test_repro_commands_succeed(example, capsys):
    code, out, _ = run(capsys, "repro", example)
    assert code == OK and out
