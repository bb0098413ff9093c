"""Tests for the besselk-diagnostics command line"""

import csv
import math

import numpy as np
import pytest
from click.testing import CliRunner

from besselk_ad import __version__
from besselk_ad.numerics.besselk import BranchConfig
from besselk_ad.numerics.errors import ConfigError
from besselk_ad.numerics.likelihood import nll_hess, profile_neg2loglik
from besselk_ad.numerics.matern import NU, MaternParams
from besselk_ad.scripts.accuracy_grid import (
    ACCURACY_FIELDS,
    GridSpec,
    digit_gain,
    run_accuracy_grid,
    summarize,
)
from besselk_ad.scripts.common import float_list
from besselk_ad.scripts.diagnostics import EXIT_DOMAIN, EXIT_IO, cli
from besselk_ad.scripts.fit_demo import THETA_TRUE, demo_dataset, reference_nu_column
from besselk_ad.scripts.timing import TIMING_FIELDS, TIMING_PAIRS


def read_rows(path):
    with path.open(newline="") as f:
        return list(csv.DictReader(f))


@pytest.fixture
def runner(monkeypatch):
    # keep the accuracy grid in-process
    monkeypatch.setenv("THREADS", "1")
    return CliRunner()


def test_version(runner):
    """--version reports the package version"""
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_uk_table(runner, tmp_path):
    """uk-table writes the nonzero coefficients of U_0..U_k"""
    out = tmp_path / "uk.csv"
    result = runner.invoke(cli, ["uk-table", "--max-order", "3", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert "U_k table Complete!" in result.output
    rows = read_rows(out)
    # U_k has k + 1 nonzero coefficients
    assert len(rows) == 1 + 2 + 3 + 4


def test_accuracy_grid_without_oracle(runner, tmp_path):
    """A small grid against the stencil reference"""
    out = tmp_path / "acc.csv"
    args = ["accuracy-grid", "--no-oracle", "--steps", "3", "--nu-hi", "3.0"]
    args += ["--x-hi", "12.0", "--out", str(out)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    rows = read_rows(out)
    assert list(rows[0]) == ACCURACY_FIELDS
    assert len(rows) == 9
    assert [float(r["nu"]) for r in rows[:3]] == [0.25, 0.25, 0.25]
    assert [float(r["x"]) for r in rows[:3]] == pytest.approx([0.005, 6.0025, 12.0])
    assert all(r["ref"] == "nan" for r in rows)
    for r in rows:
        assert float(r["d1"]) == pytest.approx(float(r["d1_ref"]), rel=1e-6)


def test_accuracy_grid_rejects_bad_range(runner, tmp_path):
    """An empty nu range is a configuration error"""
    result = runner.invoke(
        cli, ["accuracy-grid", "--no-oracle", "--nu-lo", "2", "--nu-hi", "1"]
    )
    assert result.exit_code == EXIT_DOMAIN
    assert "ConfigError" in result.output


def test_digit_gain_sign():
    """Negative gain means AD sits closer to the reference"""
    assert digit_gain(1.0 + 1e-12, 1.0 + 1e-6, 1.0) == pytest.approx(-6.0, abs=1e-3)
    assert digit_gain(1.0, 1.0 + 1e-6, 1.0) < -290.0
    assert digit_gain(1.0 + 1e-4, 1.0 + 1e-8, 1.0) == pytest.approx(4.0, abs=1e-3)


def test_grid_spec_validation():
    """Ranges must be increasing and x must stay positive"""
    assert GridSpec(nu_steps=4, x_steps=5).size == 20
    with pytest.raises(ConfigError):
        GridSpec(x_lo=0.0)
    with pytest.raises(ConfigError):
        GridSpec(nu_steps=1)


def test_summary_counts_ad_wins(branch_config):
    """Summaries skip missing value references"""
    spec = GridSpec(0.3, 2.7, 0.5, 20.0, 2, 2)
    records = run_accuracy_grid(spec, branch_config, use_oracle=False, workers=1)
    stats = summarize(records)
    assert math.isnan(stats["median_rel_err"])
    assert 0.0 <= stats["ad_beats_fd_d1"] <= 1.0


def test_timing(runner, tmp_path):
    """timing writes one row per (nu, x) pair"""
    out = tmp_path / "timing.csv"
    result = runner.invoke(cli, ["timing", "--inner", "3", "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = read_rows(out)
    assert list(rows[0]) == TIMING_FIELDS
    assert len(rows) == len(TIMING_PAIRS)
    assert all(float(r["d1_ad_ns"]) > 0.0 for r in rows)
    assert all(float(r["peak_rss_mb"]) >= 0.0 for r in rows)


def test_covmat_diag(runner, tmp_path):
    """covmat-diag reports a positive definite matrix on a small grid"""
    out = tmp_path / "cov.csv"
    args = ["covmat-diag", "--side", "4", "--rho", "0.5", "--nu", "1.25,2.5"]
    result = runner.invoke(cli, args + ["--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = read_rows(out)
    assert len(rows) == 2
    assert all(r["status"] == "ok" and float(r["lambda_min"]) > 0.0 for r in rows)
    assert "oracle_logdet" not in rows[0]


def test_covmat_diag_with_oracle(runner, tmp_path, oracle):
    """With --oracle the mpmath matrix is compared entry for entry"""
    out = tmp_path / "cov.csv"
    args = ["covmat-diag", "--side", "3", "--rho", "0.5", "--nu", "1.25", "--oracle"]
    result = runner.invoke(cli, args + ["--digits", "20", "--out", str(out)])
    assert result.exit_code == 0, result.output
    (row,) = read_rows(out)
    assert row["oracle_status"] == "ok"
    assert float(row["logdet_rel_diff"]) < 1e-10


def test_profile_surface(runner, tmp_path):
    """profile-surface centres the grid on its minimum"""
    out = tmp_path / "profile.csv"
    args = ["profile-surface", "--n", "16", "--m", "2", "--steps", "3", "--out", str(out)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    rows = read_rows(out)
    assert len(rows) == 9
    centered = [float(r["centered"]) for r in rows if r["status"] == "ok"]
    assert min(centered) == 0.0
    assert all(c >= 0.0 for c in centered)


def test_profile_surface_from_dataset(runner, tmp_path, small_dataset):
    """A dataset file replaces the simulated data"""
    data = small_dataset.to_csv(tmp_path / "data.csv")
    out = tmp_path / "profile.csv"
    args = ["profile-surface", "--dataset", str(data), "--steps", "2", "--out", str(out)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    assert str(data) in result.output


def test_missing_dataset_is_io_error(runner, tmp_path):
    """An unreadable dataset exits with the I/O code"""
    args = ["profile-surface", "--dataset", str(tmp_path / "absent.csv")]
    result = runner.invoke(cli, args + ["--out", str(tmp_path / "p.csv")])
    assert result.exit_code == EXIT_IO


def test_bad_config_is_domain_error(runner, tmp_path):
    """Unknown config keys exit with the domain code"""
    config = tmp_path / "config.yaml"
    config.write_text("a9: 1.0\n")
    result = runner.invoke(cli, ["covmat-diag", "--side", "3", "--config", str(config)])
    assert result.exit_code == EXIT_DOMAIN
    assert "a9" in result.output


def test_missing_config_is_io_error(runner, tmp_path):
    """A --config path that does not exist exits with the I/O code"""
    result = runner.invoke(
        cli, ["timing", "--inner", "1", "--config", str(tmp_path / "nope.yaml")]
    )
    assert result.exit_code == EXIT_IO


def test_custom_config_is_applied(runner, tmp_path, temp_config):
    """A valid config file is loaded and the command runs"""
    out = tmp_path / "cov.csv"
    args = ["covmat-diag", "--side", "3", "--config", str(temp_config), "--out", str(out)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output


@pytest.mark.slow
def test_fit_demo(runner, tmp_path):
    """fit-demo writes six arms and the Hessian column comparison"""
    out = tmp_path / "fit.csv"
    args = ["fit-demo", "--n", "25", "--m", "4", "--max-iters", "10", "--out", str(out)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    rows = read_rows(out)
    assert [r["method"] for r in rows] == [
        "AD (BFGS)",
        "AD (Fisher)",
        "AD (Hessian)",
        "FD (BFGS)",
        "FD (Fisher)",
        "FD (Hessian)",
    ]
    columns = read_rows(tmp_path / "fit_hessian_columns.csv")
    assert len(columns) == 21
    assert {r["point"] for r in columns} == {"init"} | {r["method"] for r in rows}
    for r in columns:
        if r["entry"] == "nu,nu" and (r["point"].startswith("AD") or r["point"] == "init"):
            assert float(r["ad_rel_err"]) <= 1e-5, r


def test_run_all_quick(runner, tmp_path):
    """run-all appends one summary row per selected command"""
    out_dir = tmp_path / "diag"
    args = ["run-all", "--quick", "--out-dir", str(out_dir)]
    args += ["--command", "uk-table", "--command", "covmat-diag"]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    summary = read_rows(out_dir / "summary.csv")
    assert [r["command"] for r in summary] == ["uk-table", "covmat-diag"]
    assert all(r["status"] == "success" for r in summary)
    assert (out_dir / "covmat_diag.csv").exists()

    # a second run appends below the same header
    runner.invoke(cli, args)
    assert len(read_rows(out_dir / "summary.csv")) == 4


def test_float_list():
    """Comma lists parse to floats; junk is a usage error"""
    assert float_list("0.5, 1,2e1") == [0.5, 1.0, 20.0]
    with pytest.raises(Exception):
        float_list("a,b")


def test_covmat_diag_reference_cells(runner, tmp_path):
    """On the 24 x 24 grid: (0.01, 0.4) is near the identity; (100, 3.5) fails to factorise"""
    out = tmp_path / "cov.csv"
    args = ["covmat-diag", "--rho", "0.01,100", "--nu", "0.4,3.5", "--out", str(out)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    rows = {(float(r["rho"]), float(r["nu"])): r for r in read_rows(out)}
    smooth = rows[(0.01, 0.4)]
    assert smooth["status"] == "ok"
    assert float(smooth["lambda_min"]) == pytest.approx(0.95171, rel=1e-4)
    assert float(smooth["logdet"]) == pytest.approx(-0.25972, rel=1e-4)
    singular = rows[(100.0, 3.5)]
    assert singular["status"] == "cholesky_failed"
    assert math.isnan(float(singular["logdet"]))
    assert all(float(r["lambda_min"]) <= 1.0 for r in rows.values())


def test_profile_surface_values(runner, tmp_path):
    """Rows hold -2 log L_p at each node of the simulated dataset, centred on the grid minimum"""
    out = tmp_path / "profile.csv"
    args = ["profile-surface", "--n", "25", "--m", "3", "--steps", "3"]
    result = runner.invoke(cli, args + ["--seed", "11", "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = read_rows(out)
    assert [float(r["rho"]) for r in rows[:3]] == [0.5, 0.5, 0.5]
    assert [float(r["nu"]) for r in rows[:3]] == pytest.approx([1.2, 1.35, 1.5])
    assert all(r["status"] == "ok" for r in rows)
    dataset = demo_dataset(25, 3, 11, MaternParams(*THETA_TRUE), BranchConfig())
    values = [float(r["neg2loglik"]) for r in rows]
    for r, value in zip(rows, values):
        expected = profile_neg2loglik((float(r["rho"]), float(r["nu"])), dataset)
        assert value == pytest.approx(expected, rel=1e-12)
        assert float(r["centered"]) == pytest.approx(value - min(values), abs=1e-9)
    assert sum(1 for r in rows if float(r["centered"]) == 0.0) == 1
    assert max(float(r["centered"]) for r in rows) > 0.0


def test_reference_nu_column_matches_exact_hessian(tiny_dataset):
    """Second differences of the NLL value reproduce the nu column of the exact Hessian"""
    theta = MaternParams(1.1, 0.6, 1.3)
    ref = reference_nu_column(theta, tiny_dataset, BranchConfig())
    exact = nll_hess(theta, tiny_dataset)[:, NU]
    assert ref == pytest.approx(exact, rel=1e-6, abs=1e-7 * float(np.max(np.abs(exact))))
