import json
import subprocess
import sys

import pytest

from colorbij import bijections as bij
from colorbij.cli import main
from colorbij.model import parse, serialize


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_map_worked_example(capsys):
    code, out, _ = run(capsys, "map", "--bijection", "phi_dc", "UUUUDDDUDDUUDUUDDD | peak=3")
    assert code == 0
    assert out == "1,3,3,2 | cells=2,4,9\n"


def test_map_runs_inverse_automatically(capsys):
    code, out, _ = run(capsys, "map", "--bijection", "phi_dc", "1,3,3,2 | cells=2,4,9")
    assert (code, out) == (0, "UUUUDDDUDDUUDUUDDD | peak=3\n")


def test_map_infers_bijection(capsys):
    assert run(capsys, "map", "10 | marks=1")[1] == "(*o)\n"
    assert run(capsys, "map", "n=2; diag=(1,3)")[1] == "((oo)o)\n"
    assert run(capsys, "map", "1,3,2,4")[1] == "10100010010000\n"
    code, _, err = run(capsys, "map", "((*o)*)")
    assert code == 1 and "--bijection" in err


def test_map_matches_library(capsys):
    texts = ["UUUDUDUUDDDDUDUDUUDD | steps=1,2,3,5,6,15", "UUDUDD | steps=1,3 | colors=asc:2,1"]
    for text in texts:
        _, out, _ = run(capsys, "map", "--bijection", "phi_dp", text)
        assert out.strip() == serialize(bij.phi_dp(parse("dyck", text)))
        _, back, _ = run(capsys, "map", "--bijection", "phi_dp", out.strip())
        assert back.strip() == text


def test_map_json(capsys):
    code, out, _ = run(capsys, "map", "--format", "json", "UD | peak=1")
    assert code == 0
    d = json.loads(out)
    assert d["type"] == "MarkedComposition"


def test_map_input_file(tmp_path, capsys):
    src = tmp_path / "objs.txt"
    src.write_text("UD | peak=1\n\nUDUDUD | peak=2\n")
    code, out, _ = run(capsys, "map", "--input", str(src))
    assert code == 0
    assert out.splitlines() == ["1 | cells=", "1,1,1 | cells=1,2"]


def test_oeis(capsys):
    assert run(capsys, "oeis", "A001700", "--len", "5") == (0, "1 3 10 35 126\n", "")
    code, out, _ = run(capsys, "oeis", "A368178", "--len", "4", "--format", "json")
    assert json.loads(out) == {"tag": "A368178", "terms": ["2", "9", "54", "375"]}


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--bijection", "phi_bt", "--n", "5", "--gamma", "uniform")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 5
    assert all(ln.startswith("PASS domain=") and "image=" in ln for ln in lines)


def test_verify_json_and_jobs(capsys):
    code, out, _ = run(capsys, "verify", "--bijection", "phi_dc", "--n", "4", "--jobs", "2",
                       "--format", "json")
    assert code == 0
    reports = json.loads(out)
    assert [r["k"] for r in reports] == [1, 2, 3, 4]
    assert all(r["passed"] for r in reports)


def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "--identities", "--n", "4", "--up-to", "--gamma", "2,1,3")
    assert code == 0
    assert len(out.splitlines()) == 10


def test_verify_failure_exits_2(capsys, monkeypatch):
    real = bij.FORWARD["phi_bt"]
    monkeypatch.setitem(bij.FORWARD, "phi_bt", lambda w: real(type(w)("10", (1,))))
    code, out, _ = run(capsys, "verify", "--bijection", "phi_bt", "--n", "2")
    assert code == 2
    assert "FAIL" in out


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--n", "9", "--k", "4")
    assert (code, out) == (0, "n=9 k=4 gamma=uniform c=56 d=1176 p=4004\n")
    code, out, _ = run(capsys, "count", "--n", "5", "--k", "3", "--gamma", "2,1,3",
                       "--identities", "--format", "json")
    row = json.loads(out)[0]
    assert (row["c"], row["d"], row["p"]) == ("42", "140", "392")
    assert all(i["passed"] for i in row["identities"])


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "dyck", "--n", "3", "--k", "2")
    assert code == 0 and sorted(out.split()) == ["UDUUDD", "UUDDUD", "UUDUDD"]
    code, out, _ = run(capsys, "enumerate", "tree", "--n", "2", "--k", "1")
    assert out == "(ooo)\n"
    code, _, err = run(capsys, "enumerate", "tree", "--n", "2", "--k", "1", "--marking", "peak")
    assert code == 1


def test_render_to_file(tmp_path, capsys):
    target = tmp_path / "p.svg"
    code, out, _ = run(capsys, "render", "UUDD", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().count('class="step"') == 4


@pytest.mark.parametrize("argv", [
    ["map", "UDD"],
    ["map", "--bijection", "phi_dc", "UUDX"],
    ["count", "--n", "0"],
    ["count", "--n", "3", "--k", "4"],
    ["verify", "--n", "3", "--gamma", "1,a"],
    ["frobnicate"],
    [],
])
def test_invalid_input_exits_1_with_grammar(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert "Object text" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "colorbij", "oeis", "A176479", "--len", "4"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout == "2 9 44 225\n"
