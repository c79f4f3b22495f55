import json

import pytest

from tracediag.cli import main
from tracediag.dsl import serialize
from tracediag import builders as bd

from conftest import CONDENSE_4X4


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    m = tmp_path / "m.tdg"
    m.write_text("matrix A [" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in CONDENSE_4X4) + "]\n")
    reg = {"A": [[1, 2], [3, 4]]}
    d = tmp_path / "d.tdg"
    d.write_text(
        serialize(reg, {"theta": bd.theta(2), "trace": bd.matrix_loop(2), "strand": bd.strand(2, ("A",))}) + "\n"
    )
    bad = tmp_path / "bad.tdg"
    bad.write_text("diagram x { dim 2; node a cilia (e, e, e); inputs (); outputs (); }\n")
    return m, d, bad


def test_check(capsys, files):
    _, d, bad = files
    code, out, err = run(capsys, "check", str(d))
    assert code == 0 and "3 diagrams" in out and not err
    code, out, err = run(capsys, "check", str(bad))
    assert code == 2 and not out
    assert "bad.tdg:1:" in err and "error:" in err


def test_eval_and_function(capsys, files):
    _, d, _ = files
    assert run(capsys, "eval", str(d), "--diagram", "theta")[:2] == (0, "-2\n")
    assert run(capsys, "eval", str(d), "--diagram", "trace")[:2] == (0, "5\n")
    code, out, _ = run(capsys, "function", str(d), "--diagram", "strand")
    assert code == 0
    assert out.splitlines() == [
        "out=(1) in=(1) value=1",
        "out=(1) in=(2) value=2",
        "out=(2) in=(1) value=3",
        "out=(2) in=(2) value=4",
    ]
    code, out, _ = run(capsys, "function", str(d), "--diagram", "strand", "--json")
    assert json.loads(out)["coefficients"][1] == {"out": [1], "in": [2], "value": "2"}
    code, _, err = run(capsys, "eval", str(d), "--diagram", "strand")
    assert code == 2 and "leaves" in err
    code, _, err = run(capsys, "eval", str(d), "--diagram", "nope")
    assert code == 2 and "no diagram" in err


def test_colorings(capsys, files):
    _, d, _ = files
    code, out, _ = run(capsys, "colorings", str(d), "--diagram", "theta")
    assert code == 0
    assert out.splitlines() == ["e1=1 e2=2 signature=-1 coefficient=1", "e1=2 e2=1 signature=-1 coefficient=1"]


def test_condense(capsys, files, tmp_path):
    m, d, _ = files
    code, out, _ = run(capsys, "condense", str(m))
    assert code == 0
    assert out.splitlines() == [
        "matrix A",
        "stage 0:",
        "  [3, -1, 2]",
        "  [-1, -5, 8]",
        "  [1, 1, -4]",
        "stage 1:",
        "  [8, -2]",
        "  [-4, 6]",
        "det = -8",
    ]
    z = tmp_path / "z.tdg"
    z.write_text("matrix Z [[1, 2, 3], [4, 0, 6], [7, 8, 9]]")
    code, out, err = run(capsys, "condense", str(z))
    assert code == 1 and "stage 1" in err and "60" in err
    assert run(capsys, "condense", str(d))[0] == 2


def test_verify_commands(capsys):
    code, out, _ = run(capsys, "verify", "binor", "--n", "3")
    assert code == 0 and out.startswith("PASS")
    code, out, _ = run(capsys, "verify", "jacobi", "--n", "3", "--k", "2", "--json")
    assert code == 0 and json.loads(out)[0]["equal"] is True
    code, out, _ = run(capsys, "verify", "jacobi_diagrammatic_general", "--n", "3", "--i", "2", "--k", "1")
    assert code == 1 and out.startswith("FAIL")
    assert run(capsys, "verify", "binor", "--n", "2")[0] == 2
    assert run(capsys, "verify", "unknown", "--n", "2")[0] == 2


def test_verify_all_exit_code(capsys):
    code, out, err = run(capsys, "verify-all", "--n", "2")
    # at n = 2 the i = 2 generalized bubble case fails its printed constant
    assert code == 1 and "FAIL    jacobi_diagrammatic_general n=2 k=1 i=2" in out


def test_usage_errors(capsys, tmp_path):
    assert run(capsys)[0] == 2
    assert run(capsys, "eval", str(tmp_path / "missing.tdg"), "--diagram", "x")[0] == 2
    assert run(capsys, "verify-all", "--n", "x")[0] == 2
    assert run(capsys, "verify", "binor")[0] == 2
