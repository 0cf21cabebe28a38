"""Command-line surface: flags, exit codes, formats, determinism."""

import csv
import io
import json
from fractions import Fraction as F

import pytest

from pelab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_family_conic_fixture(capsys):
    code, out, _ = run(capsys, "family", "--n", "1", "--lambda", "2", "--c", "1/3", "--Lambda", "-3", "--r1", "1")
    assert code == 0
    assert 'P = "r^4 - 4*r + 3"' in out
    assert "conic case" in out
    assert "base coefficient derived = 1/2" in out
    assert "base coefficient printed = 1/6" in out


def test_family_edge_json(capsys):
    code, out, _ = run(capsys, "family", "--n", "1", "--lambda", "2", "--c", "1/3", "--Lambda", "-3", "--r1", "2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["alpha"] == "5/4"
    assert payload["beta_sq_derived"] == "15/8"
    assert payload["beta_sq_paper"] == "75/32"
    assert payload["berger_coeff"] == "1/3"
    assert payload["z_scale"] == "1"
    assert payload["P_text"] == "r^4 - 19/2*r + 3"


def test_family_catalogue_shortcut(capsys):
    code, out, _ = run(capsys, "family", "--n", "1", "--k", "1", "--r1", "1")
    assert code == 0
    assert "berger_coeff = 1" in out


def test_family_missing_flags_exits_2(capsys):
    code, _, err = run(capsys, "family", "--n", "1", "--lambda", "2")
    assert code == 2
    assert "missing required flags" in err


def test_family_k_conflicts_exit_2(capsys):
    code, _, _ = run(capsys, "family", "--n", "1", "--k", "1", "--c", "2", "--r1", "1")
    assert code == 2


def test_family_invalid_params_exit_2(capsys):
    code, _, _ = run(capsys, "family", "--n", "1", "--lambda", "2", "--c", "1", "--Lambda", "3", "--r1", "1")
    assert code == 2
    code, _, _ = run(capsys, "family", "--n", "1", "--lambda", "2", "--c", "1", "--Lambda", "-3", "--r1", "1/2")
    assert code == 2


def test_missing_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--n", "1", "--k", "1", "--r1", "1", "--points", "6", "--seed", "3")
    assert code == 0
    assert "PASS" in out


def test_verify_fail_wrong_lambda(capsys):
    code, out, _ = run(capsys, "verify", "--n", "1", "--k", "1", "--r1", "1", "--points", "4", "--Lambda-check", "-2.5")
    assert code == 1
    assert "FAIL" in out


def test_verify_zero_points_exits_2(capsys):
    code, _, _ = run(capsys, "verify", "--n", "1", "--k", "1", "--r1", "1", "--points", "0")
    assert code == 2


def test_verify_rescaled_chart(capsys):
    code, out, _ = run(capsys, "verify", "--chart", "rescaled", "--rho1", "derived", "--points", "5")
    assert code == 0
    assert "PASS" in out
    code, out, _ = run(capsys, "verify", "--chart", "rescaled", "--rho1", "paper", "--points", "4")
    assert code == 0


def test_verify_deterministic(capsys):
    args = ("verify", "--n", "1", "--k", "1", "--r1", "1", "--points", "5", "--seed", "11", "--format", "json")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_verify_csv_columns(capsys):
    code, out, _ = run(capsys, "verify", "--n", "1", "--k", "1", "--r1", "1", "--points", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["r", "psi", "u", "v", "einstein_residual", "scalar", "bianchi_max", "symmetry_max"]
    assert len(rows) == 4


def test_audit_informs_never_fails(capsys):
    code, out, _ = run(capsys, "audit")
    assert code == 0
    assert out.count("derived confirmed; printed form fails") == 9
    code, out, _ = run(capsys, "audit", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    quantities = {row["quantity"] for row in rows}
    assert any("beta_sq" in q for q in quantities)
    assert any("smooth-cone c" in q for q in quantities)
    assert any("conic base" in q for q in quantities)
    assert any("rho1^2" in q for q in quantities)


def test_sweep_alpha_monotone(capsys):
    code, out, _ = run(capsys, "sweep", "--param", "r1", "--start", "1.01", "--stop", "10", "--count", "20", "--n", "1", "--k", "1")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["r1", "c", "alpha", "beta_sq_derived", "berger_coeff", "z_scale"]
    alphas = [F(row[2]) for row in rows[1:]]
    assert all(b > a for a, b in zip(alphas, alphas[1:]))


def test_sweep_k_catalogue(capsys):
    # alpha continuation at r1 = 1 equals (n+1)/k
    code, out, _ = run(capsys, "sweep", "--param", "k", "--start", "1", "--stop", "5", "--count", "5", "--n", "1", "--r1", "1")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))[1:]
    for k, row in zip(range(1, 6), rows):
        assert F(row[2]) == F(2, k)
        assert F(row[4]) == F(1, k)


def test_sweep_minimal_two_rows(capsys):
    code, out, _ = run(capsys, "sweep", "--param", "r1", "--start", "2", "--stop", "3", "--count", "2", "--n", "1", "--k", "1")
    assert code == 0
    assert len(list(csv.reader(io.StringIO(out)))) == 3


def test_sweep_malformed_exits_2(capsys):
    base = ("sweep", "--param", "r1", "--n", "1", "--k", "1")
    assert run(capsys, *base, "--start", "3", "--stop", "2", "--count", "5")[0] == 2
    assert run(capsys, *base, "--start", "2", "--stop", "3", "--count", "1")[0] == 2
    code, _, _ = run(capsys, "sweep", "--param", "c", "--start", "0", "--stop", "1", "--count", "3", "--spacing", "log", "--n", "1", "--lambda", "2", "--Lambda", "-3", "--r1", "2")
    assert code == 2


def test_sweep_verify_column(capsys):
    code, out, _ = run(
        capsys, "sweep", "--param", "r1", "--start", "1.5", "--stop", "2.5", "--count", "2",
        "--n", "1", "--k", "1", "--verify", "--points", "2",
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][-1] == "max_einstein_residual"
    assert all(float(row[-1]) < 1e-6 for row in rows[1:])


def test_sweep_deterministic(capsys):
    args = ("sweep", "--param", "t", "--start", "1/10", "--stop", "2", "--count", "6", "--n", "1", "--k", "1")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_limit_csv_and_summary(tmp_path, capsys):
    summary_path = tmp_path / "summary.json"
    code, out, _ = run(
        capsys, "limit", "--n", "1", "--t-list", "0.1,0.01", "--rho-grid", "1:2:5",
        "--summary-output", str(summary_path),
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "rho", "dev_drho2", "dev_theta2", "dev_base"]
    assert len(rows) == 11
    by_t = {}
    for t, rho, d1, d2, d3 in rows[1:]:
        by_t.setdefault(t, []).append(float(d1))
        assert float(d3) == 0.0
    assert max(by_t["1/10"]) > max(by_t["1/100"])
    summary = json.loads(summary_path.read_text())
    assert "rho1_derived" in summary and "rho1_paper" in summary
    assert "fitted_order_per_coefficient" in summary


def test_limit_json_format(capsys):
    code, out, _ = run(capsys, "limit", "--n", "1", "--t-list", "0.1,0.01", "--rho-grid", "1,1.5,2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["summary"]["rho1_derived"] == pytest.approx((2 / 3) ** 0.5)
    assert len(payload["rows"]) == 6


def test_limit_grid_outside_domain_exits_2(capsys):
    code, _, err = run(capsys, "limit", "--n", "1", "--t-list", "0.1", "--rho-grid", "0.5,1")
    assert code == 2
    assert "inner radius" in err


def test_audit_mismatch_maps_to_exit_3(monkeypatch, capsys):
    import pelab.cli as cli_mod
    from pelab.family import AuditMismatch

    def boom(params, samples=25):
        raise AuditMismatch("forced for the exit-code contract")

    monkeypatch.setattr(cli_mod.fam, "family_report", boom)
    code, _, err = run(capsys, "family", "--n", "1", "--k", "1", "--r1", "1")
    assert code == 3
    assert "audit mismatch" in err


def test_sweep_r1_flag_conflicts_with_swept_param(capsys):
    code, _, _ = run(capsys, "sweep", "--param", "r1", "--start", "2", "--stop", "3", "--count", "2", "--n", "1", "--k", "1", "--r1", "5")
    assert code == 2


def test_output_files_written(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, out, _ = run(
        capsys, "sweep", "--param", "r1", "--start", "2", "--stop", "3", "--count", "2",
        "--n", "1", "--k", "1", "--output", str(out_path),
    )
    assert code == 0 and out == ""
    assert out_path.read_text().startswith("r1,c,alpha")
