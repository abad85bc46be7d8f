import json
import subprocess
import sys
from pathlib import Path

import pytest

from quadcover.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "F(2)*F(3)")
    assert code == 0 and out.strip() == "F(2) + F(4)"
    code, out, _ = run(capsys, "eval", "--json", "S2(F(3))")
    doc = json.loads(out)
    assert doc["result"] == "F(1) + F(5)" and doc["rank"] == 6 and doc["resolved"]


def test_cohom(capsys):
    code, out, _ = run(capsys, "cohom", "--json", "F(4) + L(2; u)")
    assert code == 0 and json.loads(out) == {"expr": "F(4) + L(2; u)", "h0": 3, "h1": 1, "chi": 2, "resolved": True}
    code, out, _ = run(capsys, "cohom", "End(I(2, 1; u))")
    assert code == 0 and "h0 = 1" in out
    # only one 3-torsion point is named, so End of a rank-3 stable bundle stays open
    code, out, _ = run(capsys, "cohom", "--json", "End(I(3, 1; u))")
    assert code == 0 and json.loads(out)["resolved"] is False


def test_moduli(capsys):
    code, out, _ = run(capsys, "moduli", "--e", "3", "--window", "4", "--json")
    doc = json.loads(out)
    assert code == 0 and len(doc["accepted"]) == 1
    acc = doc["accepted"][0]
    assert acc["E_shape"] == [[1, 1]] * 3 and acc["E_iso"] == [0, 1, 2]
    assert acc["F_shape"] == [[2, 3]] and acc["relations"] == []
    code, out, _ = run(capsys, "moduli", "--e", "3")
    assert "accepted:" in out


def test_prym(capsys):
    code, out, _ = run(capsys, "prym", "--json", str(DATA / "branch_s4.json"))
    assert code == 0
    assert json.loads(out) == {"genus": 4, "d2": 1, "surjective": True, "polarization": [1, 1, 4], "component": "full"}
    code, out, _ = run(capsys, "prym", "--json", str(DATA / "branch_imprimitive.json"))
    assert json.loads(out)["polarization"] == [1, 1, 2]


def test_conics(capsys):
    path = str(DATA / "pencil_six_branch.json")
    code, out, _ = run(capsys, "conics", "branch", "--json", path)
    doc = json.loads(out)
    assert code == 0 and doc["degree"] == 6 and doc["squarefree"]
    code, out, _ = run(capsys, "conics", "pattern", path)
    assert out.strip() == "none"
    code, out, _ = run(capsys, "conics", "fiber", "--json", "--at", "1/2", path)
    assert json.loads(out)["y"] == "1/2"


def test_out_flag(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "eval", "--json", "--out", str(target), "F(2)")
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["result"] == "F(2)"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["eval", "S2(F(3)"], 2),
        (["prym", "/nonexistent.json"], 2),
        (["frobnicate"], 2),
        (["cohom", "det(F(2))"], 1),
        (["eval", "Sym(3, F(3))"], 1),
    ],
)
def test_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code
    if argv[0] != "frobnicate":
        assert err.startswith("error:")


def test_invalid_branch_data_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"degree": 4, "alpha": [1, 2, 3, 4], "beta": [1, 2, 3, 4], "sigmas": [[2, 1, 3, 4]]}))
    assert run(capsys, "prym", str(bad))[0] == 1
    bad.write_text(json.dumps({"degree": 4}))
    assert run(capsys, "prym", str(bad))[0] == 2
    bad.write_text("{not json")
    assert run(capsys, "prym", str(bad))[0] == 2


def test_reports_are_byte_stable():
    cmd = [sys.executable, "-m", "quadcover", "moduli", "--e", "2", "--window", "2", "--json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
