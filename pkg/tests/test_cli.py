import csv
import json
from pathlib import Path

import numpy as np
import pytest

from qdpotential.cli import JobConfig, main
from qdpotential.decompose import load_boundary_data
from qdpotential.domain import load_domain
from qdpotential.errors import ParseError
from qdpotential.solvers import dirichlet_solve

DATA = Path(__file__).resolve().parent.parent / "data"


def d(name):
    return str(DATA / name)


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return rows


# ---------------------------------------------------------------- commands


def test_validate_disc(capsys):
    code, out = run_cli(capsys, "validate", "--domain", d("disc.json"))
    assert code == 0
    assert "area QD: yes" in out and "double witness: q=1 valid" in out


def test_validate_area_domain_hint(capsys):
    code, out = run_cli(capsys, "validate", "--domain", d("cardioid_like.json"))
    assert code == 0 and "area QD: yes" in out


def test_solve_dirichlet_reports_value_and_residual(capsys):
    code, out = run_cli(capsys, "solve-dirichlet", "--domain", d("disc.json"), "--data", d("sbar_over_z_minus_2.json"))
    assert code == 0
    assert "u(0) = -0.25" in out
    assert "PASS" in out and "FAIL" not in out


def test_solve_dirichlet_json(capsys):
    code, out = run_cli(capsys, "solve-dirichlet", "--domain", d("disc.json"),
                        "--data", d("sbar_over_z_minus_2.json"), "--json")
    obj = json.loads(out)
    assert code == 0 and obj["status"] == 0
    assert all(c["pass"] for c in obj["checks"].values())


@pytest.mark.parametrize("dom", ["disc.json", "double_qd.json"])
def test_dtn(capsys, dom):
    code, out = run_cli(capsys, "dtn", "--domain", d(dom), "--data", d("z_plus_sbar.json"))
    assert code == 0 and "FAIL" not in out


def test_neumann_disc(capsys):
    code, out = run_cli(capsys, "solve-neumann", "--domain", d("disc.json"), "--data", d("psi_2cos.json"))
    assert code == 0 and "FAIL" not in out


def test_neumann_double_mean_gate(capsys):
    # (1 + w^2)/w has arc-length mean 2*pi*0.6 on w + 0.3w^2 + 0.03w^3, where |f'| = 1 + 0.6 cos(t) + ...
    code, out = run_cli(capsys, "solve-neumann", "--domain", d("double_qd.json"), "--data", d("psi_2cos.json"))
    assert code == 5 and "incompatible data" in out


def test_neumann_mean_nonzero_exit_5(capsys):
    code, out = run_cli(capsys, "solve-neumann", "--domain", d("disc.json"), "--data", d("psi_const.json"))
    assert code == 5 and "incompatible data" in out


def test_decompose_prints_w_and_z(capsys):
    code, out = run_cli(capsys, "decompose", "--domain", d("cardioid_like.json"),
                        "--data", d("sbar_over_z_minus_2.json"), "--anchor", "0.1,0.2")
    assert code == 0 and "w = " in out and "z = " in out


def test_project(capsys):
    code, _ = run_cli(capsys, "project", "--domain", d("disc.json"), "--data", d("z_plus_sbar.json"))
    assert code == 0


@pytest.mark.parametrize("dom", ["disc.json", "cardioid_like.json", "double_qd.json"])
def test_verify_passes(capsys, dom):
    code, out = run_cli(capsys, "verify", "--domain", d(dom), "--data", d("sbar_over_z_minus_2.json"))
    assert code == 0 and "all checks passed" in out


def test_verify_fails_nonzero_with_impossible_tolerance(capsys, tmp_path):
    # a tolerance override below rounding makes the solver residual gate trip
    code, _ = run_cli(capsys, "verify", "--domain", d("double_qd.json"), "--data", d("sbar_over_z_minus_2.json"),
                      "--tol", "1e-30")
    assert code == 6


# ---------------------------------------------------------------- exit codes


def test_parse_error_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, out = run_cli(capsys, "validate", "--domain", str(bad))
    assert code == 2 and "line" in out


def test_samples_must_be_power_of_two(capsys):
    assert main(["validate", "--domain", d("disc.json"), "--samples", "100"]) == 2
    with pytest.raises(ParseError):
        JobConfig("validate", "x", samples=32)
    with pytest.raises(ParseError):
        JobConfig("validate", "x", anchor=1.0)


def test_invalid_domain_exit_3(capsys, tmp_path):
    p = write(tmp_path, "dom.json", {"map_numer": [[0, 0], [1, 0], [1, 0]]})
    code, out = run_cli(capsys, "validate", "--domain", p)
    assert code == 3 and "critical point" in out


def test_singular_data_exit_4(capsys, tmp_path):
    p = write(tmp_path, "data.json", {"numer_coeffs": [[[1, 0]]], "denom_coeffs": [[[-1, 0]], [[1, 0]]]})
    code, out = run_cli(capsys, "solve-dirichlet", "--domain", d("disc.json"), "--data", p)
    assert code == 4 and "singular boundary data" in out


def test_missing_file_exit_2(capsys):
    code, _ = run_cli(capsys, "validate", "--domain", "/nonexistent/dom.json")
    assert code == 2


# ---------------------------------------------------------------- sample export


def test_sample_boundary_rows(capsys, tmp_path):
    out = tmp_path / "b.csv"
    code, _ = run_cli(capsys, "sample", "--domain", d("disc.json"), "--data", d("z_plus_sbar.json"),
                      "--out", str(out), "--samples", "64")
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 64
    r0 = {k: float(v) for k, v in rows[0].items()}
    assert r0["theta"] == 0 and abs(r0["re_z"] - 1) < 1e-15
    assert abs(r0["re_tangent"]) < 1e-15 and abs(r0["im_tangent"] - 1) < 1e-15 and abs(r0["speed"] - 1) < 1e-15
    assert abs(r0["re_value"] - 2) < 1e-14


def test_sample_area_boundary_row(capsys, tmp_path):
    out = tmp_path / "a.csv"
    code, _ = run_cli(capsys, "sample", "--domain", d("cardioid_like.json"), "--data", d("z_plus_sbar.json"),
                      "--out", str(out), "--samples", "64")
    assert code == 0
    r0 = {k: float(v) for k, v in read_csv(out)[0].items()}
    assert abs(r0["re_z"] - 1.4) < 1e-14 and abs(r0["speed"] - 1.8) < 1e-14


def test_sample_constant_interior(capsys, tmp_path):
    data = write(tmp_path, "one.json", {"numer_coeffs": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]})  # z s
    out = tmp_path / "u.csv"
    code, _ = run_cli(capsys, "sample", "--domain", d("disc.json"), "--data", data, "--out", str(out),
                      "--grid", "interior", "--samples", "64", "--radii", "4")
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 64 * 4
    assert all(abs(float(r["re_u"]) - 1) < 1e-13 and abs(float(r["im_u"])) < 1e-13 for r in rows)


def test_sample_roundtrip(capsys, tmp_path):
    out = tmp_path / "r.csv"
    dom_path, data_path = d("double_qd.json"), d("sbar_over_z_minus_2.json")
    code, _ = run_cli(capsys, "sample", "--domain", dom_path, "--data", data_path, "--out", str(out),
                      "--grid", "interior", "--samples", "64", "--radii", "3")
    assert code == 0
    dom, R = load_domain(dom_path), load_boundary_data(data_path)
    rep = dirichlet_solve(dom, 0, R)
    rows = read_csv(out)
    r = (np.arange(3) + 0.5) / 3
    th = 2 * np.pi * np.arange(64) / 64
    v = (r[None, :] * np.exp(1j * th)[:, None]).ravel()
    z = dom.f(v)
    u = rep.h_hat(v) + np.conj(rep.H_hat(v))
    got_z = np.array([float(x["re_z"]) + 1j * float(x["im_z"]) for x in rows])
    got_u = np.array([float(x["re_u"]) + 1j * float(x["im_u"]) for x in rows])
    assert np.max(np.abs(got_z - z)) <= 1e-12 and np.max(np.abs(got_u - u)) <= 1e-12


def test_sample_unwritable_exit_2(capsys, tmp_path):
    code, _ = run_cli(capsys, "sample", "--domain", d("disc.json"), "--data", d("z_plus_sbar.json"),
                      "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 2
