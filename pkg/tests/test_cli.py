import json
import subprocess
import sys

import pytest

from charp.cli import main, run_command


def run(*argv):
    code, report, out = run_command(list(argv))
    return code, report, out


def body(out):
    return out.splitlines()[1:]


def test_gen():
    code, _, out = run("gen", "--n", "1", "--l", "2", "--p", "2")
    assert code == 0
    assert body(out) == ["x1*dlog(y11) + x2*dlog(y21)"]


def test_residue():
    code, report, out = run("residue", "--pi", "y21", "gen(1,2)")
    assert code == 0
    assert "d1 = x1*dlog(y11)" in body(out)
    assert "d2 = x2" in body(out)
    assert report["outputs"]["second_residue"]["terms"] == [{"basis": [], "coefficient": "x2"}]


def test_residue_outside_u0_exits_3():
    code, report, _ = run("residue", "--pi", "y", "x/y^3*dlog(x)")
    assert code == 3
    assert report["error"]["kind"] == "FiltrationError"


def test_as_reduce():
    code, report, out = run("as-reduce", "--p", "2", "t^2 + t")
    assert code == 0 and body(out)[-1] == "trivial"
    assert report["verdict"]["trivial"] is True
    code, report, out = run("as-reduce", "--p", "2", "1/t")
    assert code == 0 and report["verdict"]["trivial"] is False


def test_canonical_reports_certificate():
    code, report, out = run("canonical", "--p", "2", "x*dlog(y) + x^2/pi^2*dlog(y) + x/pi*dlog(y)")
    assert code == 0
    assert report["verdict"]["certificate_verified"] is True
    assert report["outputs"]["pieces"] == []
    assert report["certificates"]["wp_images"]
    assert "canonical: x*dlog(y)" in body(out)


def test_extend():
    code, report, out = run("extend", "--p", "3", "--tau", "tau", "--e", "2", "--u", "z", "x/tau*dlog(y)")
    assert code == 0
    assert "extended: pi^-2*((x/z)*dlog(y))" in body(out)


def test_chain_and_tame():
    code, report, out = run("chain", "--n", "2", "--l", "1", "--p", "3")
    assert code == 0 and report["verdict"]["nontrivial"] is True
    assert [s["variable"] for s in report["certificates"]["steps"]] == ["y12", "y11"]
    code, report, out = run("tame", "--pi", "y", "{x1, y11, y}")
    assert code == 0 and body(out)[-1] == "tame symbol at y: {x1, y11}"


@pytest.mark.parametrize("argv", [
    ("residue", "x +* y"),
    ("verify", "no-such-suite"),
    ("gen", "--n", "1"),
    ("as-reduce", "--p", "4", "t"),
    ("bogus",),
])
def test_usage_errors_exit_2(argv, capsys):
    code, _, _ = run(*argv)
    assert code == 2


def test_parse_error_position_in_message():
    code, report, _ = run("residue", "--format", "json", "x +* y")
    assert code == 2 and "line 1, column 4" in report["error"]["message"]


def test_json_schema_and_determinism():
    argv = ["verify", "kp-roundtrip", "--trials", "20", "--seed", "5", "--format", "json"]
    code, report, out = run(*argv)
    assert code == 0
    data = json.loads(out)
    assert data["schema_version"] == 1
    assert data["session"]["seed"] == 5
    assert data["command"] == ["charp", *argv]
    assert run(*argv)[2] == out


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("CHARP_SEED", "17")
    _, report, _ = run("gen", "--n", "1", "--l", "1")
    assert report["session"]["seed"] == 17
    _, report, _ = run("gen", "--n", "1", "--l", "1", "--seed", "3")
    assert report["session"]["seed"] == 3


def test_timing_is_opt_in():
    _, report, _ = run("gen", "--n", "1", "--l", "1")
    assert "timing_seconds" not in report
    _, report, _ = run("gen", "--n", "1", "--l", "1", "--timing")
    assert report["timing_seconds"] >= 0


def test_main_prints(capsys):
    assert main(["gen", "--n", "1", "--l", "1"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "x1*dlog(y11)"


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "charp.cli", "as-reduce", "t^2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "nontrivial"
