import json
import subprocess
import sys

import pytest

from knottheta.cli import main
from knottheta.pd import parse_pd

from conftest import TREFOIL_TEXT


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_theta_json(capsys):
    code, out, _ = run(capsys, "theta", "--pd", TREFOIL_TEXT, "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["alexander"] == "T^-1 - 1 + T"
    assert obj["convention"] == {"f2_diagonal": True}
    assert obj["pd_hash"] == parse_pd(TREFOIL_TEXT).digest()
    assert all(len(t) == 4 for t in obj["theta"])


def test_theta_of_empty_diagram(capsys):
    code, out, _ = run(capsys, "theta", "--pd", "[]", "--json")
    assert code == 0 and json.loads(out)["theta"] == []


def test_wd_from_file(capsys, tmp_path):
    f = tmp_path / "trefoil.pd"
    f.write_text(TREFOIL_TEXT + "\n")
    code, out, _ = run(capsys, "wd", "--clasp", "+", "--twists", "0", "--pd", f"@{f}")
    assert code == 0
    assert parse_pd(out.strip()).n == 20


def test_wd_json(capsys):
    code, out, _ = run(capsys, "wd", "--clasp", "-", "--pd", "3_1", "--json")
    obj = json.loads(out)
    assert (obj["n"], obj["N"], obj["writhe"]) == (20, 40, -3)


@pytest.mark.parametrize("fmt, prefix", [("bracket", "[["), ("functional", "PD[X[")])
def test_parse_formats(capsys, fmt, prefix):
    code, out, _ = run(capsys, "parse", "--pd", "3_1", "--format", fmt)
    assert code == 0 and out.startswith(prefix)


def test_alexander_by_name(capsys):
    assert run(capsys, "alexander", "--pd", "4_1") == (0, "-T^-1 + 3 - T\n", "")


def test_consum_and_mirror(capsys):
    code, out, _ = run(capsys, "consum", "--pd", "3_1", "--pd", "3_1", "--json")
    assert json.loads(out)["writhe"] == -6
    code, out, _ = run(capsys, "mirror", "--pd", "3_1", "--json")
    assert json.loads(out)["writhe"] == 3


def test_dumps(capsys):
    code, out, _ = run(capsys, "dump-upright", "--pd", "[[1,2,2,1]]")
    assert out == "1: 0\n2: -1\n3: 0\n(-1,2,1)\n"
    code, out, _ = run(capsys, "dump-traffic", "--pd", "[[1,2,2,1]]")
    assert out.startswith("denominator: 1\n")


def test_rotation_override(capsys):
    code, out, _ = run(capsys, "theta", "--pd", "[[1,2,2,1]]", "--rotations", "0,0,0", "--json")
    assert code == 0 and json.loads(out)["theta"] != []
    code, _, err = run(capsys, "theta", "--pd", "[[1,2,2,1]]", "--rotations", "0,0")
    assert code == 2 and "3 integers" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["theta", "--pd", "[[1,4,2,5],[3,6,4,1],[5,2,6,1]]"],
        ["theta", "--pd", "[[1,4,2,5"],
        ["theta", "--pd", "99_1"],
        ["theta", "--pd", "3_1", "--convention", "f2-diagonal=maybe"],
        ["wd", "--pd", "3_1"],
        ["verify", "--checks", "nope"],
        ["nosuch"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_off_convention_fails_with_1(capsys):
    code, _, err = run(capsys, "theta", "--pd", "[[1,2,2,1]]", "--convention", "f2-diagonal=off")
    assert code == 1 and "denominator" in err


def test_render_from_json(capsys, tmp_path):
    _, out, _ = run(capsys, "theta", "--pd", "3_1", "--json")
    src = tmp_path / "t.json"
    src.write_text(out)
    svg, ppm = tmp_path / "t.svg", tmp_path / "t.ppm"
    assert run(capsys, "render", "--in", str(src), "--out", str(svg))[0] == 0
    assert run(capsys, "render", "--pd", "3_1", "--out", str(ppm))[0] == 0
    assert svg.read_bytes().startswith(b"<?xml")
    assert ppm.read_bytes().startswith(b"P6\n")
    # both routes carry the same data
    assert run(capsys, "render", "--pd", "3_1", "--out", str(tmp_path / "u.svg"))[0] == 0
    assert (tmp_path / "u.svg").read_bytes() == svg.read_bytes()


def test_verify_summary(capsys, tmp_path):
    summary = tmp_path / "s.json"
    code, out, _ = run(capsys, "verify", "--max-crossings", "4", "--cache", str(tmp_path / "c"),
                       "--summary", str(summary))
    assert code == 0
    assert "flower: pass 2" in out
    assert json.loads(summary.read_text())["counts"] == {"flower": {"pass": 2}}
    _, out, _ = run(capsys, "verify", "--max-crossings", "4", "--cache", str(tmp_path / "c"))
    assert "computed 0, cached 2" in out


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "knottheta", "alexander", "--pd", "3_1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "T^-1 - 1 + T\n"
