import csv
import io
import json

import numpy as np
import pytest

from qcbxy.cli import CONTOUR_HEADER, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_metric_json_zero_temperature(capsys):
    code, out, _ = run(capsys, "metric", "--beta", "inf", "--gamma", "1", "--lambda", "0",
                       "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert rec["components"]["nc_ll"] == pytest.approx(1 / 16, rel=1e-12)
    assert rec["classical_is_zero_temperature_limit"] is True
    assert len(rec["matrix"]) == 3


def test_metric_json_finite_beta(capsys):
    code, out, _ = run(capsys, "metric", "--beta", "10", "--gamma", "1", "--lambda", "0",
                       "--format", "json")
    rec = json.loads(out)
    assert rec["components"]["nc_ll"] == pytest.approx(np.tanh(5) ** 2 / 16, rel=1e-9)


def test_metric_csv_header_exact(capsys):
    code, out, _ = run(capsys, "metric", "--T", "0.5", "--gamma", "0", "--lambda", "0.5",
                       "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "lambda,gamma,T,g_bb,g_bg,g_bl,g_gg,g_gl,g_ll,nc_gg,nc_gl,nc_ll,max_eig"
    rec = dict(zip(*rows(out)))
    assert float(rec["nc_ll"]) == 0.0
    assert rec["T"] == "5.000000000000e-01"


def test_metric_high_temperature(capsys):
    _, out, _ = run(capsys, "metric", "--beta", "0.0001", "--gamma", "0.7", "--lambda", "0.4",
                   "--format", "csv")
    rec = dict(zip(*rows(out)))
    for name in ("nc_gg", "nc_gl", "nc_ll"):
        assert abs(float(rec[name])) < 1e-8


@pytest.mark.parametrize("argv", [
    ["metric", "--beta", "-1", "--gamma", "1", "--lambda", "0"],
    ["metric", "--beta", "1", "--T", "1", "--gamma", "1", "--lambda", "0"],
    ["metric", "--beta", "1", "--gamma", "nan", "--lambda", "0"],
    ["metric", "--beta", "1", "--gamma", "1", "--lambda", "0", "--N", "4"],
    ["contour", "--lambda-range", "1", "0", "3"],
    ["scaling", "--gamma", "0.5", "--lambda", "0.2", "--critical"],
    ["oracle-check", "--direction", "0", "0", "0"],
])
def test_invalid_input_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_missing_required_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["metric", "--beta", "1"])
    assert exc.value.code == 2


CELL = ["--lambda-range", "0.3", "0.3", "1", "--gamma-range", "0.6", "0.6", "1"]


def test_contour_single_cell_matches_metric(capsys):
    code, out, _ = run(capsys, "contour", *CELL, "--cap", "none")
    assert code == 0
    header, row = rows(out)
    assert header == CONTOUR_HEADER
    _, mout, _ = run(capsys, "metric", "--T", "0.01", "--gamma", "0.6", "--lambda", "0.3",
                     "--format", "csv")
    rec = dict(zip(*rows(mout)))
    assert row[3] == rec["max_eig"]


def test_contour_deterministic_and_symmetric(capsys, tmp_path):
    grid = ["--lambda-range", "-1.2", "1.2", "5", "--gamma-range", "-0.5", "0.5", "3",
            "--T", "0.05", "--cap", "none"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["contour", *grid, "--out", str(a)]) == 0
    assert main(["contour", *grid, "--out", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = rows(a.read_text())[1:]
    assert [(r[0], r[1]) for r in data][:4] == [
        ("-1.200000000000e+00", "-5.000000000000e-01"),
        ("-1.200000000000e+00", "0.000000000000e+00"),
        ("-1.200000000000e+00", "5.000000000000e-01"),
        ("-6.000000000000e-01", "-5.000000000000e-01")]
    field = np.array([float(r[3]) for r in data]).reshape(5, 3)
    np.testing.assert_allclose(field, field[::-1], rtol=1e-9)


def test_contour_cap(capsys):
    _, out, _ = run(capsys, "contour", "--lambda-range", "1", "1", "1", "--gamma-range",
                    "0.5", "0.5", "1", "--T", "0.001", "--cap", "3")
    assert float(rows(out)[1][3]) <= 3.0


def test_contour_components_header(capsys):
    _, out, _ = run(capsys, "contour", *CELL, "--components")
    assert rows(out)[0][:4] == ["lambda", "gamma", "T", "g_bb"]


def test_scaling_region_a_c_bb(capsys):
    code, out, _ = run(capsys, "scaling", "--gamma", "1", "--lambda", "1.5", "--component",
                       "c_bb", "--expected", "--format", "json")
    assert code == 0
    fit = json.loads(out)["fits"][0]
    assert fit["alpha"] == pytest.approx(0.5, abs=0.1)
    assert fit["pass"] is True


@pytest.mark.parametrize("lam,gamma,component,alpha", [
    ("1", "1", "nc_ll", -1.0), ("1", "0", "nc_gg", -0.5)])
def test_scaling_critical(capsys, lam, gamma, component, alpha):
    code, out, _ = run(capsys, "scaling", "--gamma", gamma, "--lambda", lam, "--critical",
                       "--component", component, "--expected", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["fits"][0]["alpha"] == pytest.approx(alpha, abs=0.05)
    assert payload["scaling_dimension_report"][0]["consistent"]


def test_scaling_expected_failure_exit_3(capsys):
    # a shallow window biases the region-B nc_gg exponent beyond the tolerance
    code, out, _ = run(capsys, "scaling", "--gamma", "0.5", "--lambda", "0.2",
                       "--component", "nc_gg", "--expected")
    assert code == 3
    assert rows(out)[1][-1] == "false"


def test_scaling_crossover_window_rejected(capsys):
    code, _, err = run(capsys, "scaling", "--gamma", "1", "--lambda", "1.5", "--t-min", "0.01",
                       "--t-max", "1")
    assert code == 2 and "window" in err


def test_oracle_check_default_suite(capsys):
    code, out, _ = run(capsys, "oracle-check")
    assert code == 0
    table = rows(out)
    assert len(table) == 7
    assert all(r[-1] == "true" for r in table[1:])


def test_oracle_check_gamma_zero_lambda_axis(capsys):
    code, out, _ = run(capsys, "oracle-check", "--point", "2", "0", "0.5", "--direction",
                       "0", "0", "1")
    assert code == 0
    _, mout, _ = run(capsys, "metric", "--beta", "2", "--gamma", "0", "--lambda", "0.5",
                     "--N", "11", "--format", "json")
    rec = json.loads(mout)
    analytic = float(rows(out)[1][6])
    assert rec["components"]["nc_ll"] == 0.0
    # the oracle compares against the total (not per-site) metric
    assert analytic == pytest.approx(11 * rec["components"]["c_ll"], rel=1e-12)


def test_oracle_threshold_breach_exit_4(capsys):
    code, _, _ = run(capsys, "oracle-check", "--direction", "0", "0", "1", "--threshold", "1e-14")
    assert code == 4


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "metric", "beta": 10, "gamma": 1, "lambda": 0,
                               "format": "json"}))
    code, out, _ = run(capsys, "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["components"]["nc_ll"] == pytest.approx(np.tanh(5) ** 2 / 16)
    # explicit flags override the file
    code, out, _ = run(capsys, "--config", str(cfg), "metric", "--beta", "1")
    assert json.loads(out)["components"]["nc_ll"] == pytest.approx(np.tanh(0.5) ** 2 / 16)


def test_config_unreadable(capsys, tmp_path):
    code, _, err = run(capsys, "--config", str(tmp_path / "missing.json"), "metric")
    assert code == 2
