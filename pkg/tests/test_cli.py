import json

import pytest

from rayclass.cli import main, parse_ideal, parse_omega
from rayclass.cmfield import field_invariants


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_field(capsys):
    code, out, _ = run(capsys, "field", "--d", "-20")
    assert code == 0 and "h_K = 2" in out and "(2,2,3)" in out
    code, out, _ = run(capsys, "field", "--d", "-163", "--json")
    assert json.loads(out)["results"]["h"] == 1


def test_field_bad_input(capsys):
    code, _, err = run(capsys, "field", "--d", "-10")
    assert code == 2 and "error" in err
    with pytest.raises(SystemExit) as exc:
        main(["field"])
    assert exc.value.code == 2


def test_bound_routes(capsys):
    code, out, _ = run(capsys, "bound", "--d", "-20", "--nm", "598")
    assert code == 0 and "2.286282" in out and "n_min = 3" in out
    code, out, _ = run(capsys, "bound", "--d", "-20", "--ideal", "p:2;p:13;p:23:15", "--json")
    res = json.loads(out)["results"]
    assert res["Nm"] == 598 and res["n_min"] == 3 and res["raw_bound"].startswith("2.286282")
    code, out, _ = run(capsys, "bound", "--d", "-20", "--nm", "13", "--modulus-integer")
    assert "InertCase" in out and "n_min = 0" in out
    assert run(capsys, "bound", "--d", "-20", "--ideal", "q:2")[0] == 2
    assert run(capsys, "bound", "--d", "-20")[0] == 2


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "j", "--tau-surd", "-15")
    assert code == 0 and "-191657.83286" in out
    code, out, _ = run(capsys, "eval", "j", "--tau", "i", "--json")
    res = json.loads(out)["results"]
    assert abs(float(res["re"]) - 1728) < 1e-20
    code, out, _ = run(capsys, "eval", "weber-x", "--d", "-7", "--n", "0", "--omega", "0,1/3", "--json")
    res = json.loads(out)["results"]
    assert abs(float(res["im"])) < 1e-30 and res["re"].startswith("-0.41137244595")
    for argv in (
        ["eval", "siegel", "--tau", "2i", "--v", "1/3,2/3"],
        ["eval", "fricke", "--form", "2,2,3", "--v", "1/3,0"],
        ["eval", "C", "--tau-surd", "-20"],
        ["eval", "y2", "--d", "-7", "--n", "1", "--omega", "1,2/5"],
        ["eval", "hilbert", "--d", "-23"],
    ):
        assert run(capsys, *argv)[0] == 0
    assert run(capsys, "eval", "j", "--tau", "i", "--tau-surd", "-7")[0] == 2
    assert run(capsys, "eval", "siegel", "--tau", "i")[0] == 2
    assert run(capsys, "eval", "weber-x", "--d", "-4", "--omega", "0,1/3")[0] == 2


def test_verify(capsys, tmp_path):
    out_file = tmp_path / "cert.json"
    code, out, _ = run(capsys, "verify", "normconstant", "--N", "2", "--points", "3", "--out", str(out_file))
    assert code == 0 and "PASS" in out
    assert json.loads(out_file.read_text())["pass"] is True
    code, out, _ = run(capsys, "verify", "j-inequality", "--from", "-60", "--to", "-15", "--json")
    assert code == 0 and json.loads(out)["results"]["pass"]
    assert run(capsys, "verify", "hkc", "--d", "-23", "--n-max", "3")[0] == 0
    assert run(capsys, "verify", "ffgg", "--trials", "3", "--seed", "7")[0] == 0
    assert run(capsys, "verify", "curve", "--samples", "3")[0] == 0
    assert run(capsys, "verify", "siegel-bounds", "--N-max", "4", "--samples", "10")[0] == 0
    assert run(capsys, "verify", "hkc", "--d", "-7")[0] == 2


def test_example(capsys):
    code, out, _ = run(capsys, "example", "paper")
    assert code == 0 and out.count(": ok") == 4
    code, out1, _ = run(capsys, "example", "paper", "--json")
    _, out2, _ = run(capsys, "example", "paper", "--json")
    assert out1 == out2
    res = json.loads(out1)["results"]
    assert res["report"]["Nm"] == 598 and res["modulus"] == "[598, 195+13*tau]"


def test_parsers():
    assert parse_omega("0,1/3") == (0, 1, 3)
    F = field_invariants(-20)
    assert parse_ideal(F, "n:6").norm == 36
