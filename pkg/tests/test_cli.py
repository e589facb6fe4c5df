import json
import subprocess
import sys

import pytest

from kmatch.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_homology_report(capsys):
    code, out, _ = run(capsys, "homology", "--graph", "wheel:5", "--k", "2", "--expect", "3,3")
    data = json.loads(out)
    assert code == 0
    assert data["homology"]["betti"] == {"3": 2}
    assert data["command"] == "homology" and data["seed"] == 0


def test_expectation_mismatch_exit_code(capsys):
    code, out, _ = run(capsys, "homology", "--graph", "wheel:5", "--k", "2", "--expect", "2")
    assert code == 1 and json.loads(out)["match"] is False


def test_budget_exit_code(capsys):
    code, out, err = run(capsys, "homology", "--graph", "complete:7", "--k", "2", "--budget", "100")
    assert code == 2 and "budget" in err


def test_budget_after_or_before_subcommand(capsys):
    a = run(capsys, "--budget", "100", "homology", "--graph", "complete:7", "--k", "2")
    b = run(capsys, "homology", "--graph", "complete:7", "--k", "2", "--budget", "100")
    assert a[0] == b[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("homology", "--graph", "nosuch:3"),
        ("verify", "--family", "wheel-M2"),
        ("homology", "--graph", "wheel:5", "--budget", "0"),
        ("sites", "--script", "cycle:x"),
    ],
)
def test_invalid_input_exit_code(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 3


def test_void_complex(capsys):
    code, out, _ = run(capsys, "homology", "--graph", "path:1", "--complex", "bd", "--bound", "0=0")
    data = json.loads(out)
    assert "void" in data["describe"]


def test_verify_family(capsys):
    code, out, _ = run(capsys, "verify", "--family", "wheel-M2", "--n", "5")
    data = json.loads(out)
    assert code == 0 and data["match"] and data["homology"]["betti"] == {"3": 2}


def test_sequence_and_gap(capsys):
    code, out, _ = run(capsys, "sequence", "--graph", "wheel:4")
    assert code == 0
    code, out, _ = run(capsys, "gap", "--graph", "clawed-path:1")
    data = json.loads(out)
    assert (data["bound"], data["observed_sphere_dim"], data["gap"]) == (1, 3, 2)


def test_mta_and_morse(capsys):
    code, out, _ = run(capsys, "mta", "--graph", "wheel:6", "--line", "--policy", "wheel:6")
    assert code == 0 and json.loads(out)["sizes"] == {"2": 6}
    code, out, _ = run(capsys, "morse", "--graph", "clawed-path:1", "--claw")
    assert code == 0


def test_output_is_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        code, out, _ = run(capsys, "caterpillar-tables", "--m", "3", "--depth", "5", "--out", str(p))
        assert code == 0 and "report in" in out
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text(encoding="utf-8"))
    assert data["A"][:3] == [2, 4, 14]


def test_sites_command(capsys):
    code, out, _ = run(capsys, "sites", "--script", "triangle-path", "--trials", "5")
    data = json.loads(out)
    assert code == 0 and data["assignment"]["sites"] == 5 and data["optimum"] == 5


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "kmatch.cli", "predict", "--family", "cycle-ind", "--n", "6"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["predicted"]["spheres"] == [1, 1]


def test_build_with_complex(capsys):
    code, out, _ = run(capsys, "build", "--graph", "caterpillar:3:2", "--k", "2")
    data = json.loads(out)
    assert code == 0
    assert data["complex"]["f_vector"]["-1"] == 1
    code, out, _ = run(capsys, "build", "--script", "triangle-path")
    assert code == 0
