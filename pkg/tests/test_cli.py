import json
import subprocess
import sys

import pytest

from weylzeta.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_json(text):
    return json.loads(text)


def test_info(capsys):
    code, out, _ = run(capsys, "info", "PU3")
    d = as_json(out)
    assert code == 0
    assert d["positive_coroots"] == [[1, 0], [0, 1], [1, 1]]
    assert d["lattice"] == "Q"
    assert d["weyl_order"] == 6


def test_pfun(capsys):
    code, out, _ = run(capsys, "pfun", "--type", "A2", "--k", "2,2,2")
    assert code == 0 and as_json(out) == {"p": "1/3780"}
    code, out, _ = run(capsys, "pfun", "--type", "A2", "--k", "2,2,2", "--y", "lambda1")
    assert as_json(out) == {"p": "53/306180"}


def test_volume(capsys):
    code, out, _ = run(capsys, "volume", "--group", "PU3", "--k", "2,2,2")
    assert code == 0 and as_json(out) == {"q": "187/688905", "pi_power": 6}
    code, out, _ = run(capsys, "volume", "--group", "PSp2", "--k", "2,2,2,2")
    assert as_json(out) == {"q": "1/322560", "pi_power": 8}
    code, out, _ = run(capsys, "volume", "--group", "SU3", "--k", "2,2,2", "--nu", "lambda1")
    assert as_json(out)["q"] == "53/229635"


def test_volume_latex(capsys):
    code, out, _ = run(capsys, "volume", "--group", "PU3", "--k", "2,2,2", "--latex")
    assert code == 0 and "187" in out and "\\pi" in out


def test_numeric(capsys):
    code, out, _ = run(capsys, "numeric", "--group", "PU3", "--s", "2,2,2", "--tol", "1e-12")
    d = as_json(out)
    assert code == 0
    assert abs(d["value"] - 0.26096454402063) < 1e-11
    assert d["bound"] <= 1e-12


def test_numeric_extended(capsys):
    code, out, _ = run(capsys, "numeric", "--group", "PU3", "--s", "4,4,4", "--tol", "1e-20", "--precision", "25")
    d = as_json(out)
    assert code == 0 and isinstance(d["value"], str) and d["value"].startswith("0.06252818988724583037")


def test_relation(capsys):
    code, out, _ = run(capsys, "relation", "pu3", "--p", "1", "--q", "2", "--s", "2")
    d = as_json(out)
    assert code == 0
    assert d["residual"] <= 1e-8 + d["residual_bound"]
    code, out, _ = run(capsys, "relation", "psp2", "--p", "2", "--q", "1", "--s", "1", "--r", "1", "--no-check")
    assert code == 0 and "residual" not in as_json(out)


def test_parity(capsys):
    code, out, _ = run(capsys, "parity", "pu3", "3", "5", "1")
    assert code == 0 and "value" in as_json(out)
    code, out, _ = run(capsys, "parity", "psp2", "1", "2", "2", "2")
    assert code == 0
    code, out, _ = run(capsys, "parity", "pu3", "1", "1", "1", "--latex")
    assert code == 0 and "\\zeta" in out


def test_witten(capsys):
    code, out, _ = run(capsys, "witten", "--group", "SU3", "--s", "2")
    assert code == 0 and abs(as_json(out)["value"] - 1.3564574159474) < 1e-10


@pytest.mark.parametrize(
    "argv, code, err",
    [
        (["volume", "--type", "A2", "--k", "1,2,2"], 2, "odd_component"),
        (["info", "G9"], 2, "unknown_group"),
        (["numeric", "--group", "PU3", "--s", "2,2"], 2, "variable_mismatch"),
        (["pfun", "--type", "A2"], 2, "input_error"),
        (["numeric", "--group", "PU3", "--s", "1,1,0"], 3, "not_provably_convergent"),
        (["relation", "pu3", "--p", "1", "--q", "1", "--s", "1"], 3, "slow_convergence"),
    ],
)
def test_errors(capsys, argv, code, err):
    got, out, stderr = run(capsys, *argv)
    assert got == code
    assert out == ""
    assert as_json(stderr)["error"] == err


def test_verify_single_criterion(capsys):
    code, out, _ = run(capsys, "verify", "--criterion", "2", "--json")
    d = as_json(out)
    assert code == 0
    assert d and all(r["ok"] for r in d["checks"])


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "weylzeta.cli", "volume", "--group", "PU3", "--k", "2,2,2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["q"] == "187/688905"
