from __future__ import annotations

import json
import subprocess
import sys

import pytest

from chebminor.cli import run_cli


def run(capsys, *argv):
    code = run_cli(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_gamma(capsys):
    code, data, err = run(capsys, "gamma", "--r", "5")
    assert code == 0 and data["Gamma_r"] == "8"
    assert "Gamma_5 = 8" in err


def test_minor_check_counterexample(capsys):
    code, data, err = run(capsys, "minor-check", "--n", "4", "--mode", "principal")
    assert code == 1
    assert data["singular_findings"][0]["I"] == [0, 2]
    assert data["singular_findings"][0]["certificate"]["witness"]["kernel"] == ["1", "-1"]


def test_minor_check_layered_ok(capsys):
    code, data, _ = run(capsys, "minor-check", "--n", "10", "--mode", "layered", "--exhaustive")
    assert code == 0 and data["counts"]["checked"] == 63503 and data["spec"]["r"] == 2


def test_minor_check_single_pair(capsys):
    code, data, _ = run(capsys, "minor-check", "--n", "10", "--mode", "single-pair",
                        "--I", "2,4,6,1", "--J", "0,2,8,7")
    assert code == 0 and data["counts"]["nonsingular"] == 1


def test_minor_check_too_large(capsys):
    code, _, err = run(capsys, "minor-check", "--n", "15", "--mode", "layered", "--r", "3")
    assert code == 2 and "--max-class-size" in err


def test_minor_check_usage_errors(capsys):
    assert run(capsys, "minor-check", "--mode", "principal")[0] == 2
    assert run(capsys, "minor-check", "--n", "6", "--mode", "nope")[0] == 2
    assert run(capsys, "minor-check", "--n", "6", "--samples", "3", "--exhaustive")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_resume_completed_is_noop_and_edited_spec_refused(tmp_path, capsys):
    out = tmp_path / "report.json"
    args = ["minor-check", "--n", "6", "--mode", "layered", "--out", str(out)]
    assert run(capsys, *args)[0] == 0
    first = out.read_text()
    assert run(capsys, *args, "--resume")[0] == 0
    assert out.read_text() == first
    code, _, err = run(capsys, "minor-check", "--n", "6", "--mode", "all-square", "--out", str(out), "--resume")
    assert code == 2 and "spec" in err


def test_spec_file(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"n": 5, "mode": "all-square"}))
    code, data, _ = run(capsys, "minor-check", "--spec", str(spec))
    assert code == 0 and data["counts"]["checked"] == 251


def test_zhang(capsys):
    code, data, _ = run(capsys, "zhang", "--r", "3", "--p", "5")
    assert code == 0 and data["counts"]["checked"] == 19
    assert run(capsys, "zhang", "--r", "7", "--p", "3")[0] == 2
    assert run(capsys, "zhang", "--r", "3", "--p", "7")[0] == 2
    code, data, _ = run(capsys, "zhang", "--r", "7", "--p", "3", "--waive-gamma")
    assert code == (1 if data["counts"]["singular"] else 0)


def test_uncertainty(capsys):
    code, data, _ = run(capsys, "uncertainty", "--r", "2", "--m", "3", "--exhaustive")
    assert code == 0 and data["certified"]
    code, data, _ = run(capsys, "uncertainty", "--r", "1", "--m", "4")
    assert code == 1 and data["witness"]["f"] == ["1", "0", "-1", "0"]
    assert run(capsys, "uncertainty", "--r", "2", "--m", "4")[0] == 2


def test_jacobi(capsys):
    code, data, _ = run(capsys, "jacobi", "--n", "8", "--trials", "20", "--seed", "7")
    assert code == 0 and data["failures"] == 0 and len(data["trials"]) == 20
    assert all(t["equal"] for t in data["trials"])
    assert run(capsys, "jacobi", "--n", "1", "--trials", "1")[0] == 2


def test_reduce_norm_valuation(capsys):
    code, data, _ = run(capsys, "reduce", "--n", "15", "--p", "5", "--element", "1 - z^3")
    assert code == 0 and data["image"] == "0"
    code, data, _ = run(capsys, "norm", "--n", "15", "--element", "1 - z^5")
    assert code == 0 and data["norm"] == "81"
    code, data, _ = run(capsys, "valuation", "--n", "5", "--p", "5", "--element", "5")
    assert code == 0 and data["valuation"] == 4
    assert run(capsys, "valuation", "--n", "21", "--p", "7", "--element", "7")[0] == 2
    assert run(capsys, "norm", "--n", "5", "--element", "1 +* z")[0] == 2


def test_crt(capsys):
    code, data, _ = run(capsys, "crt", "--n", "15", "--r", "3", "--i", "7", "--pair", "4,2")
    assert code == 0 and data["split"] == {"i": 7, "a": 4, "b": 2} and data["join"]["i"] == 7
    code, data, _ = run(capsys, "crt", "--n", "10", "--r", "2", "--members", "2,4,6,1")
    assert data["set"]["profile"] == [3, 1]
    assert run(capsys, "crt", "--n", "10", "--r", "2", "--i", "10")[0] == 2
    assert run(capsys, "crt", "--n", "12", "--r", "2")[0] == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "chebminor", "gamma", "--r", "3"],
                          capture_output=True, text=True, env={"CHEB_CACHE_DIR": str(tmp_path), "PATH": ""})
    assert proc.returncode == 0 and json.loads(proc.stdout)["Gamma_r"] == "2"
