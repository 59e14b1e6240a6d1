from __future__ import annotations

import json

import pytest

from stskein.cli import main
from stskein.engine import AlgebraElement
from stskein.parser import parse_expression
from stskein.rings import CoeffPoly
from stskein.tails import ModuleElement


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_normalize(capsys):
    code, out, _ = run(capsys, "normalize", "--in", "g[1]g[1]")
    assert code == 0
    assert AlgebraElement.from_json(json.loads(out)) == parse_expression("(q-1)*g[1] + q").to_element(2)


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--in", "t * g[1]")
    assert code == 0
    assert ModuleElement.from_json(json.loads(out)) == ModuleElement({((0, 1),): CoeffPoly.z()})


def test_reduce_witness(capsys, tmp_path):
    w = tmp_path / "w.json"
    code, out, _ = run(capsys, "reduce", "--gaps-only", "--in", "t * t[2]", "--witness", str(w))
    assert code == 0
    assert json.loads(w.read_text())["steps"]
    code, out, _ = run(capsys, "reduce", "--no-canonical", "--in", "t t[1]^-1", "--witness", str(w))
    assert code == 0


def test_convert(capsys):
    code, out, _ = run(capsys, "convert", "--in", "t^-1 * t'[1]^2 * t'[2]^-1")
    assert code == 0
    assert json.loads(out)["n"] == 3


def test_trace_and_invariant(capsys):
    code, out, _ = run(capsys, "trace", "--in", "g[1]")
    assert code == 0 and json.loads(out) == [{"q": 0, "z": 1, "L": 0, "s": [], "c": 1}]
    code, out, _ = run(capsys, "invariant", "--in", "g[1]")
    assert code == 0 and json.loads(out)["denom_one_minus_q_exp"] == 1


def test_matrix(capsys, tmp_path):
    out_file, csv_file = tmp_path / "b.json", tmp_path / "b.csv"
    code, _, _ = run(capsys, "matrix", "--level", "1", "--max-index", "1", "--max-exp", "2",
                     "--out", str(out_file), "--csv", str(csv_file))
    assert code == 0
    data = json.loads(out_file.read_text())
    assert data["level"] == 1 and data["triangular"]
    assert csv_file.read_text().startswith(",t,")


def test_order(capsys):
    assert run(capsys, "order", "compare", "t^2", "t t[1]")[1] == "LT\n"
    assert run(capsys, "order", "compare", "t t[2]", "t[1] t[2]")[1] == "GT\n"
    code, out, _ = run(capsys, "order", "enumerate", "--level", "2", "--max-index", "1")
    assert json.loads(out) == [[[0, 2]], [[0, 1], [1, 1]]]


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lemmas", "--n-max", "4", "--exp-max", "2")
    assert code == 0 and json.loads(out)["passed"]


@pytest.mark.parametrize("argv", [
    ["normalize", "--in", "g[1"],
    ["normalize", "--in", "g[0]"],
    ["normalize", "--in", "z*t"],
    ["convert", "--in", "t g[1]"],
    ["order", "compare", "t"],
    ["bogus"],
    ["normalize"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_cap_is_a_math_error(capsys):
    assert main(["--term-cap", "2", "normalize", "--in", "g[1] g[2] g[1] g[3] t g[2]"]) == 1


def test_cap_from_environment(capsys, monkeypatch):
    expr = "g[1] g[2] g[1] g[3] t g[2]"
    monkeypatch.setenv("SKEIN_TERM_CAP", "2")
    assert main(["normalize", "--in", expr]) == 1
    # the flag wins over the environment
    assert main(["--term-cap", "100000", "normalize", "--in", expr]) == 0


def test_deterministic(capsys):
    a = run(capsys, "reduce", "--in", "t^-1 t[1]^2 t[2]^-1 g[1]^-1")[1]
    b = run(capsys, "reduce", "--in", "t^-1 t[1]^2 t[2]^-1 g[1]^-1")[1]
    assert a == b
