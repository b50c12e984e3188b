import json
import math

import pytest

from riclab.cli import dumps, main
from riclab.core_math import RHO0


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_example(capsys):
    code, out, err = run(capsys, "bounds", "--delta", "0.5", "--rhobar", "0.04")
    assert code == 0 and err == ""
    rec = json.loads(out)
    assert list(rec) == ["model", "route", "delta", "rhobar", "t0", "psi_min", "psi_max", "admissible"]
    assert rec["route"] == "singular" and rec["admissible"] is True
    assert rec["t0"] == pytest.approx(0.626224, abs=1e-5)
    assert rec["psi_max"] == pytest.approx(2.3350939667784362675, rel=1e-13)


def test_bounds_eigen_route(capsys):
    code, out, _ = run(capsys, "bounds", "--route", "eigen", "--delta", "0.5", "--rhobar", "0.04")
    assert code == 0
    assert json.loads(out)["psi_max"] == pytest.approx(1.0662239640247951438, rel=1e-13)


def test_lr_placeholder_warning(capsys):
    code, _, err = run(capsys, "bounds", "--model", "lr", "--delta", "0.5", "--rhobar", "0.04")
    assert code == 0 and "C_LR" in err
    code, _, err = run(capsys, "bounds", "--model", "lr", "--c-lr", "2", "--delta", "0.5", "--rhobar", "0.04")
    assert code == 0 and err == ""


def test_bounds_outside_domain(capsys):
    code, out, err = run(capsys, "bounds", "--delta", "0.5", "--rhobar", "0.5")
    assert code == 2 and out == "" and "--force" in err
    code, out, _ = run(capsys, "bounds", "--delta", "0.5", "--rhobar", "0.5", "--force")
    assert code == 0 and json.loads(out)["admissible"] is False


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "bounds", "--delta", "1.5", "--rhobar", "0.04")[0] == 2
    assert run(capsys, "bounds", "--delta", "0.5")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2


def test_phase_curve_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "phase-curve", "--points", "7")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "# schema=1" and lines[1] == "rho,delta_threshold,admissible"
    rows = [line.split(",") for line in lines[2:]]
    assert len(rows) == 7
    assert float(rows[0][0]) == pytest.approx(1e-6) and float(rows[-1][0]) < RHO0
    assert all(adm == ("true" if float(thr) < 1 else "false") for _, thr, adm in rows)
    path = tmp_path / "curve.csv"
    code, out, _ = run(capsys, "phase-curve", "--points", "7", "-o", str(path))
    assert code == 0 and out == "" and path.read_text().splitlines() == lines


def test_fs_consts(capsys):
    code, out, _ = run(capsys, "fs-consts")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert rep["errata"][0]["detected"]


def test_mc_dev_budget_and_result(capsys):
    code, _, err = run(capsys, "mc-dev", "--n", "100000", "--rhobar", "0.5", "--t", "0.1", "--trials", "10000000")
    assert code == 3 and "exceeds" in err
    code, out, _ = run(capsys, "mc-dev", "--n", "100", "--rhobar", "0.2", "--t", "0.5", "--trials", "50",
                       "--model", "ds", "--seed", "3")
    rec = json.loads(out)
    assert code == 0 and rec["estimate"]["trials"] == 50
    assert rec["estimate"]["theory_bound"] == pytest.approx(2 * math.exp(-100 * 0.125))


def test_mc_dev_fs_domain(capsys):
    code, _, err = run(capsys, "mc-dev", "--n", "100", "--rhobar", "0.2", "--t", "0.5", "--trials", "5",
                       "--model", "fs", "--check-fs-domain", "--ensemble", "rademacher")
    assert code == 2 and "r=20" in err


def test_recover_and_ric_exact(capsys):
    code, out, _ = run(capsys, "recover", "--n", "8", "--p", "12", "--s", "1", "--trials", "3", "--per-trial")
    rec = json.loads(out)
    assert code == 0 and len(rec["summary"]["records"]) == 3
    code, out, _ = run(capsys, "ric-exact", "--n", "6", "--p", "10", "--r", "2")
    ric = json.loads(out)["ric"]
    assert code == 0 and ric["subsets_evaluated"] == 45 and ric["exhaustive"]


def test_selftest_single_suite(capsys):
    code, out, _ = run(capsys, "selftest", "--suite", "borned1")
    assert code == 0 and "borned1" in out and "PASS" in out


def test_dumps_nonfinite():
    assert json.loads(dumps({"a": math.inf, "b": math.nan, "c": [1.0]})) == {"a": "inf", "b": "nan", "c": [1.0]}
