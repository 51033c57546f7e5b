import io
import json
import subprocess
import sys

import jsonschema
import pytest

from conftest import FIXTURES, NATURE_LOVER
from disponte import cli
from disponte.errors import InvariantError

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["query", "entailed", "probability", "minas", "pinpointing_formula", "mode", "stats"],
    "properties": {
        "query": {"type": "string"},
        "entailed": {"type": "boolean"},
        "probability": {"type": ["number", "null"]},
        "minas": {"oneOf": [{"type": "null"},
                            {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}]},
        "pinpointing_formula": {"type": ["string", "null"]},
        "mode": {"type": "string"},
        "stats": {
            "type": "object",
            "additionalProperties": False,
            "required": ["rule_firings", "bdd_nodes", "worlds"],
            "properties": {
                "rule_firings": {"type": "integer"},
                "bdd_nodes": {"type": "integer"},
                "worlds": {"type": ["integer", "null"]},
            },
        },
    },
}

EX1, EX2 = str(FIXTURES / "example1.dlp"), str(FIXTURES / "example2.dlp")


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    assert code == 0, text
    report = json.loads(text)
    jsonschema.validate(report, SCHEMA)
    return report


@pytest.fixture
def kbfile(tmp_path):
    def write(text):
        p = tmp_path / "kb.dlp"
        p.write_text(text)
        return str(p)
    return write


@pytest.mark.parametrize("command", cli.COMMANDS)
@pytest.mark.parametrize("kb", [EX1, EX2])
@pytest.mark.parametrize("mode", ["pinpoint", "minas"])
def test_json_schema(command, kb, mode):
    report = run_json(command, "--kb", kb, "--query", NATURE_LOVER, "--mode", mode)
    assert report["entailed"] is True
    assert report["mode"] == mode


def test_prob_human():
    code, text = run("prob", "--kb", EX1, "--query", NATURE_LOVER)
    assert code == 0
    assert "probability: 0.3000000000" in text.splitlines()


def test_prob_json_with_cross_check():
    report = run_json("prob", "--kb", EX2, "--query", NATURE_LOVER, "--cross-check")
    assert report["probability"] == pytest.approx(0.58, abs=1e-9)
    assert report["stats"]["worlds"] == 4
    assert report["pinpointing_formula"] is not None


def test_prob_unsatisfiable_query(kbfile):
    report = run_json("prob", "--kb", kbfile(""), "--query", "ClassAssertion(Nothing, a)")
    assert report["probability"] == 0.0 and report["entailed"] is False


def test_explain():
    code, text = run("explain", "--kb", EX1, "--query", NATURE_LOVER)
    lines = text.splitlines()
    assert "MinAs: 2" in lines
    assert lines.index("{1, 2, 4, 6}") < lines.index("{1, 3, 5, 6}")
    assert "  6: 0.6 :: SubClassOf(Cat, Pet)" in lines
    assert any(line.startswith("pinpointing formula: ") for line in lines)
    report = run_json("explain", "--kb", EX1, "--query", NATURE_LOVER, "--mode", "minas")
    assert report["minas"] == [[1, 2, 4, 6], [1, 3, 5, 6]]
    assert report["pinpointing_formula"] is None


def test_explain_edge_cases(kbfile):
    code, text = run("explain", "--kb", EX1, "--query", "ClassAssertion(Dog, kevin)")
    assert code == 0 and "not entailed" in text and "MinAs: 0" in text
    code, text = run("explain", "--kb", kbfile("0.4 :: ClassAssertion(A, a)\n"),
                     "--query", "ClassAssertion(A, a)")
    assert "{1}" in text.splitlines()


def test_check(kbfile):
    assert run("check", "--kb", EX1, "--query", NATURE_LOVER) == (0, "entailed\n")
    assert run("check", "--kb", kbfile(""), "--query", "ClassAssertion(A, a)") == (0, "not entailed\n")
    chain = kbfile("SubClassOf(A, B)\nSubClassOf(B, C)\nClassAssertion(A, a)\n")
    assert run("check", "--kb", chain, "--query", "ClassAssertion(C, a)") == (0, "entailed\n")


def test_oracle(kbfile):
    code, text = run("oracle", "--kb", EX2, "--query", NATURE_LOVER)
    lines = text.splitlines()
    assert "worlds: 4" in lines and "entailing worlds: 3" in lines
    assert "probability: 0.5800000000" in lines
    assert "selection (F4,F5)\tprobability\tentails" in lines
    report = run_json("oracle", "--kb", kbfile("ClassAssertion(A, a)\n"), "--query", "ClassAssertion(A, a)")
    assert report["stats"]["worlds"] == 1


def test_var_order_and_emit(tmp_path):
    target = tmp_path / "d.txt"
    code, text = run("prob", "--kb", EX1, "--query", NATURE_LOVER, "--var-order", "6,5,4,3,2,1",
                     "--emit-bdd", str(target))
    assert code == 0 and "probability: 0.3000000000" in text
    lines = target.read_text().splitlines()
    assert lines[0].startswith("root ")
    assert {line.split()[1] for line in lines[1:]} == {"F1", "F6"}


@pytest.mark.parametrize("argv", [
    ["prob", "--kb", EX1, "--query", "SubClassOf(Cat)"],
    ["prob", "--kb", EX1, "--query", NATURE_LOVER, "--var-order", "1,2"],
    ["prob", "--kb", EX1, "--query", NATURE_LOVER, "--var-order", "x"],
    ["check", "--kb", EX1, "--query", NATURE_LOVER, "--emit-bdd", "out.txt"],
    ["prob", "--kb", "/nonexistent.dlp", "--query", NATURE_LOVER],
    ["frobnicate", "--kb", EX1, "--query", NATURE_LOVER],
])
def test_input_errors(argv):
    assert run(*argv)[0] == cli.EXIT_INPUT


def test_parse_error_position(kbfile, capsys):
    path = kbfile("ClassAssertion(Cat, tom)\n2 :: SubClassOf(Cat, Pet)\n")
    assert run("prob", "--kb", path, "--query", NATURE_LOVER)[0] == 1
    assert f"{path}:2:1: bad-probability:" in capsys.readouterr().err


def test_limits():
    assert run("prob", "--kb", EX1, "--query", NATURE_LOVER, "--budget", "3")[0] == cli.EXIT_LIMIT
    assert run("oracle", "--kb", EX1, "--query", NATURE_LOVER, "--oracle-cap", "1")[0] == cli.EXIT_LIMIT


def test_invariant_failures(monkeypatch):
    real = cli.answer

    def skewed(*args, **kw):
        a = real(*args, **kw)
        a.probability += 0.1
        return a

    monkeypatch.setattr(cli, "answer", skewed)
    code, text = run("prob", "--kb", EX1, "--query", NATURE_LOVER, "--cross-check")
    assert code == cli.EXIT_INVARIANT and "DISAGREE" in text

    def broken(*args, **kw):
        raise InvariantError("simulated")

    monkeypatch.setattr(cli, "answer", broken)
    assert run("prob", "--kb", EX1, "--query", NATURE_LOVER)[0] == cli.EXIT_INVARIANT


def test_deterministic_subprocess():
    argv = [sys.executable, "-m", "disponte", "explain", "--kb", EX1, "--query", NATURE_LOVER, "--json"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["minas"] == [[1, 2, 4, 6], [1, 3, 5, 6]]
