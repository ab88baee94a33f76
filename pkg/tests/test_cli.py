import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from ortho2c.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_hermite(capsys):
    code, out, _ = run(capsys, "verify", "--weight", "hermite", "--max-degree", "6")
    assert code == 0
    summary = json.loads(out.strip().splitlines()[-1])
    assert summary["passed"] and summary["failures"] == [] and summary["seed"] == 42


def test_verify_is_deterministic(capsys):
    first = run(capsys, "--seed", "7", "verify", "--weight", "disk", "--lambda", "0.5", "--max-degree", "4")
    second = run(capsys, "verify", "--weight", "disk", "--lambda", "0.5", "--max-degree", "4", "--seed", "7")
    assert first[0] == 0 and first[1] == second[1]


def test_tolerance_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ORTHO2C_TOL", "1e-30")
    code, out, err = run(capsys, "verify", "--weight", "hermite", "--max-degree", "3")
    assert code == 1 and "verification failed" in err
    assert json.loads(out.strip().splitlines()[-1])["failures"]
    # an explicit flag wins over the environment
    code, *_ = run(capsys, "--tol", "1e-9", "verify", "--weight", "hermite", "--max-degree", "3")
    assert code == 0


def test_zeros_deltoid_u(capsys):
    code, out, _ = run(capsys, "zeros", "--weight", "deltoid-u", "--degree", "3")
    rec = json.loads(out)
    assert code == 0 and rec["count"] == 6 and len(rec["nodes"]) == 6


def test_cubature_hermite_fails(capsys):
    code, _, err = run(capsys, "cubature", "--weight", "hermite", "--degree", "4")
    assert code == 1 and "no Gaussian cubature at this degree" in err


def test_cubature_deltoid_u(capsys, tmp_path):
    path = tmp_path / "rule.json"
    code, *_ = run(capsys, "cubature", "--weight", "deltoid-u", "--degree", "2", "-o", str(path))
    rec = json.loads(path.read_text())
    assert code == 0 and rec["degree"] == 3 and len(rec["nodes"]) == 3 and min(rec["weights"]) > 0


@pytest.mark.parametrize(
    "argv",
    [
        ["basis", "--weight", "hermite"],
        ["basis", "--degree", "3", "--bogus"],
        ["basis", "--weight", "disk", "--degree", "2"],
        ["basis", "--weight", "hermite", "--lambda", "1", "--degree", "2"],
        ["basis", "--weight", "disk", "--lambda", "-2", "--degree", "2"],
        ["basis", "--degree", "99"],
        ["nosuch"],
        ["kernel", "--n", "2"],
        ["kernel", "--n", "2", "--z", "0.1", "--z", "0.2", "--zeta", "0.3"],
        ["basis", "--weight", "custom", "--degree", "2"],
        ["--tol", "-1", "basis", "--degree", "2"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "usage" in err


def test_missing_input_file(capsys, tmp_path):
    code, _, err = run(capsys, "convert", "--input", str(tmp_path / "none.json"), "--to", "real")
    assert code == 1 and "input error" in err


def test_basis_and_convert_round_trip(capsys, tmp_path):
    src = tmp_path / "basis.json"
    real = tmp_path / "real.json"
    back = tmp_path / "back.json"
    assert run(capsys, "basis", "--weight", "disk", "--lambda", "1", "--degree", "4", "-o", str(src))[0] == 0
    assert run(capsys, "convert", "--input", str(src), "--to", "real", "-o", str(real))[0] == 0
    assert run(capsys, "convert", "--input", str(real), "--to", "complex", "-o", str(back))[0] == 0
    a, b = json.loads(src.read_text()), json.loads(back.read_text())
    for la, lb in zip(a["levels"], b["levels"]):
        for pa, pb in zip(la["polys"], lb["polys"]):
            ta = {(t[0], t[1]): complex(t[2], t[3]) for t in pa["terms"]}
            tb = {(t[0], t[1]): complex(t[2], t[3]) for t in pb["terms"]}
            for key in set(ta) | set(tb):
                assert abs(ta.get(key, 0) - tb.get(key, 0)) < 1e-12
    kinds = {p["kind"] for lv in json.loads(real.read_text())["levels"] for p in lv["polys"]}
    assert kinds == {"rpoly"}
    code, _, err = run(capsys, "convert", "--input", str(real), "--to", "real")
    assert code == 2 and "already real" in err


def test_recurrence_report_and_csv(capsys, tmp_path):
    table = tmp_path / "coeffs.csv"
    code, out, _ = run(capsys, "recurrence", "--weight", "deltoid-u", "--degree", "4", "--csv", str(table))
    rep = json.loads(out)
    assert code == 0
    assert rep["gamma_alpha_residual"] < 1e-9 and max(rep["commuting_residuals"]) < 1e-9
    assert all(f["pass"] for f in rep["favard"]) and rep["beta_zero"] is False
    rows = list(csv.reader(table.open()))
    assert rows[0] == ["n", "name", "row", "col", "re", "im"]
    code, out, err = run(capsys, "recurrence", "--weight", "hermite", "--degree", "3", "--csv", "-")
    assert out.startswith("n,name,row,col,re,im") and json.loads(err)["beta_zero"] is True


def test_kernel_methods_agree(capsys):
    code, out, _ = run(capsys, "kernel", "--weight", "hermite", "--n", "3", "--z", "0.3+0.2j", "--zeta=-0.4+0.1j", "--method", "all", "--random", "2")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(recs) == 3 * 4
    for i in range(0, len(recs), 4):
        vals = [complex(*r["value"]) for r in recs[i : i + 4]]
        assert max(abs(v - vals[0]) for v in vals) < 1e-9 * max(1, abs(vals[0]))


def test_kernel_confluent_point(capsys):
    code, _, err = run(capsys, "kernel", "--n", "2", "--z", "0.3", "--zeta", "0.3", "--method", "cd_complex")
    assert code == 1 and "confluent point" in err


def test_moments_feed_custom_weight(capsys, tmp_path):
    table = tmp_path / "moments.json"
    assert run(capsys, "moments", "--weight", "disk", "--lambda", "0.5", "--max-degree", "8", "-o", str(table))[0] == 0
    code, out, _ = run(capsys, "basis", "--weight", "custom", "--moments", str(table), "--degree", "3")
    ref = run(capsys, "basis", "--weight", "disk", "--lambda", "0.5", "--degree", "3")[1]
    custom = json.loads(out)["levels"][3]["polys"][1]["terms"]
    disk = json.loads(ref)["levels"][3]["polys"][1]["terms"]
    assert code == 0
    assert np.allclose(np.array(custom)[:, 2:], np.array(disk)[:, 2:], atol=1e-10)


def test_custom_not_positive_definite(capsys, tmp_path):
    table = tmp_path / "bad.json"
    table.write_text(json.dumps({"max_degree": 2, "moments": [[0, 0, 1, 0], [1, 0, 0, 0], [1, 1, -1, 0], [2, 0, 0, 0]]}))
    code, _, err = run(capsys, "basis", "--weight", "custom", "--moments", str(table), "--degree", "1")
    assert code == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ortho2c", "zeros", "--weight", "hermite", "--degree", "3"], capture_output=True, text=True)
    assert res.returncode == 0
    assert np.allclose(json.loads(res.stdout)["nodes"], [[0.0, 0.0]], atol=1e-8)
    res = subprocess.run([sys.executable, "-m", "ortho2c", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "verify" in res.stdout
