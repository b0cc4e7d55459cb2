import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from gammaspacings import claimed_pdf_yj
from gammaspacings.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def read_curve(path):
    ys, fs = [], []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#") or line == "y,f":
            continue
        a, b = line.split(",")
        ys.append(float(a))
        fs.append(float(b))
    return np.array(ys), np.array(fs)


def invoke(runner, args, **kwargs):
    result = runner.invoke(main, args, catch_exceptions=False, **kwargs)
    return result


def test_version_flag(runner):
    result = invoke(runner, ["--version"])
    assert result.exit_code == 0
    assert "gammaspacings" in result.output


def test_density_default_writes_true_and_claimed(runner):
    with runner.isolated_filesystem():
        result = invoke(runner, ["density", "--m", "2", "--points", "51"])
        assert result.exit_code == 0
        y_e, f_e = read_curve("density_exact.csv")
        y_c, f_c = read_curve("density_claimed.csv")
        assert np.array_equal(y_e, y_c)
        assert y_e[0] == 0.0
        assert f_e[0] == 0.5  # true m=2 density is positive at the origin
        assert f_c[0] == 0.0  # claimed Gamma(2, 1/2) density vanishes there
        manifest = json.loads(Path("density.manifest.json").read_text())
        assert manifest["subcommand"] == "density"
        assert manifest["parameters"]["m"] == 2.0
        assert "timestamp" in manifest and "version" in manifest


def test_density_m1_routes_agree(runner):
    with runner.isolated_filesystem():
        invoke(runner, ["density", "--m", "1", "--points", "41"])
        _, f_e = read_curve("density_exact.csv")
        _, f_c = read_curve("density_claimed.csv")
        assert np.max(np.abs(f_e - f_c)) < 1e-12


def test_density_exact_rejects_noninteger_shape(runner):
    result = runner.invoke(main, ["density", "--m", "2.5", "--which", "exact"])
    assert result.exit_code == 2


def test_density_usage_validation(runner):
    assert runner.invoke(main, ["density", "--m", "0"]).exit_code == 2
    assert runner.invoke(main, ["density", "--m", "2", "--j", "3"]).exit_code == 2
    assert runner.invoke(main, ["density", "--m", "2", "--points", "1"]).exit_code == 2
    assert runner.invoke(main, ["density", "--m", "2", "--ymax", "-1"]).exit_code == 2


def test_density_numeric_route_matches_claimed_at_m1(runner):
    with runner.isolated_filesystem():
        result = invoke(runner, [
            "density", "--m", "1", "--n", "3", "--j", "2", "--which", "numeric",
            "--points", "9", "--ymax", "4", "--tol", "1e-9",
        ])
        assert result.exit_code == 0
        ys, fs = read_curve("density_numeric.csv")
        expected = claimed_pdf_yj(3, 2, 1.0, ys)
        assert np.max(np.abs(fs - expected)) < 1e-6


def test_density_json_format(runner):
    with runner.isolated_filesystem():
        invoke(runner, ["density", "--m", "2", "--which", "exact",
                        "--points", "21", "--format", "json"])
        blob = json.loads(Path("density_exact.json").read_text())
        assert set(blob) == {"y", "f", "normalization_error", "meta"}
        assert blob["meta"]["curve"] == "exact"
        assert len(blob["y"]) == len(blob["f"]) == 21


def test_simulate_spacing_reruns_byte_identical(runner):
    args = ["simulate", "--n", "2", "--m", "2", "--j", "2",
            "--reps", "500", "--seed", "9"]
    with runner.isolated_filesystem():
        invoke(runner, args + ["--output", "a"])
        invoke(runner, args + ["--output", "b"])
        invoke(runner, args + ["--output", "c", "--workers", "4"])
        a = Path("a.csv").read_bytes()
        assert a == Path("b.csv").read_bytes()
        assert a == Path("c.csv").read_bytes()
        man_a = json.loads(Path("a.manifest.json").read_text())
        man_b = json.loads(Path("b.manifest.json").read_text())
        del man_a["timestamp"], man_b["timestamp"]
        man_a["parameters"].pop("output")
        man_b["parameters"].pop("output")
        assert man_a == man_b


def test_simulate_statistic_with_histogram(runner):
    with runner.isolated_filesystem():
        result = invoke(runner, [
            "simulate", "--n", "5", "--m", "1", "--stat", "zk", "--k", "2",
            "--reps", "400", "--seed", "3", "--bins", "10",
        ])
        assert result.exit_code == 0
        text = Path("simulate.csv").read_text()
        assert "# statistic: zk" in text
        values = [float(v) for v in text.split("value\n", 1)[1].split()]
        assert len(values) == 400
        assert all(0 < v <= 1 for v in values)
        hist_lines = Path("simulate_hist.csv").read_text().splitlines()
        header_at = next(i for i, ln in enumerate(hist_lines)
                         if not ln.startswith("#"))
        assert hist_lines[header_at] == "bin_lo,bin_hi,density"
        assert len(hist_lines) - header_at - 1 == 10


def test_simulate_json_format(runner):
    with runner.isolated_filesystem():
        invoke(runner, ["simulate", "--n", "3", "--m", "1.5", "--j", "2",
                        "--reps", "50", "--seed", "4", "--format", "json"])
        blob = json.loads(Path("simulate.json").read_text())
        assert blob["statistic"] == "y2"
        assert blob["config"]["reps"] == 50
        assert len(blob["values"]) == 50


def test_simulate_usage_errors(runner):
    base = ["simulate", "--n", "3", "--m", "1", "--reps", "10", "--seed", "0"]
    assert runner.invoke(main, base).exit_code == 2  # neither --j nor --stat
    assert runner.invoke(main, base + ["--j", "2", "--stat", "zk", "--k", "1"]).exit_code == 2
    assert runner.invoke(main, base + ["--stat", "zk"]).exit_code == 2  # no --k
    assert runner.invoke(main, base + ["--j", "2", "--k", "1"]).exit_code == 2
    assert runner.invoke(main, base + ["--j", "4"]).exit_code == 2  # j > n
    assert runner.invoke(main, base + ["--stat", "zk", "--k", "3"]).exit_code == 2


def test_validate_rejects_claim_only_beyond_unit_shape(runner):
    with runner.isolated_filesystem():
        result = invoke(runner, ["validate", "--m", "1,3", "--reps", "2000",
                                 "--seed", "2024"])
        assert result.exit_code == 0
        report = json.loads(Path("validate.json").read_text())
        by_m = {row["m"]: row for row in report["rows"]}
        assert by_m[1.0]["truth_route"] == "exact"
        assert by_m[1.0]["claimed_rejected"] is False
        assert by_m[3.0]["claimed_rejected"] is True
        assert by_m[1.0]["truth_p"] > 0.05
        assert by_m[3.0]["truth_p"] > 0.05
        assert by_m[3.0]["claimed_p"] < 1e-6
        assert "claim rejected" in result.output
        assert "claim consistent" in result.output


def test_validate_usage_validation(runner):
    assert runner.invoke(main, ["validate", "--m", "1,x", "--seed", "0"]).exit_code == 2
    assert runner.invoke(main, ["validate", "--alpha", "1.5", "--seed", "0"]).exit_code == 2


def test_critical_values_table(runner):
    with runner.isolated_filesystem():
        result = invoke(runner, [
            "critical-values", "--n", "5", "--m", "1", "--k", "1",
            "--alpha", "0.01,0.05,0.1", "--reps", "2000", "--seed", "11",
        ])
        assert result.exit_code == 0
        lines = [ln for ln in Path("critical_values.csv").read_text().splitlines()
                 if not ln.startswith("#")]
        assert lines[0] == "alpha,critical_value"
        rows = [tuple(map(float, ln.split(","))) for ln in lines[1:]]
        assert [a for a, _ in rows] == [0.01, 0.05, 0.1]
        crits = [c for _, c in rows]
        assert crits[0] >= crits[1] >= crits[2]  # upper tail shrinks with alpha
        assert all(0 < c <= 1 for c in crits)


def test_discordancy_test_flags_planted_outlier(runner):
    with runner.isolated_filesystem():
        Path("data.txt").write_text(
            "# five observations\n1.1\n0.9\n1.0\n\n1.2\n50.0\n"
        )
        result = runner.invoke(main, [
            "test", "data.txt", "--k", "1", "--m", "1",
            "--reps", "2000", "--seed", "7", "--output", "report",
        ])
        assert result.exit_code == 1
        report = json.loads(Path("report.json").read_text())
        assert report["decision"] == "discordant"
        assert report["statistic"] > report["critical_value"]
        assert report["p_value"] < 0.05
        assert report["config"]["n"] == 5
        assert Path("report.manifest.json").exists()


def test_discordancy_test_clean_sample_exits_zero(runner):
    with runner.isolated_filesystem():
        Path("data.txt").write_text("1.1\n0.9\n1.0\n1.2\n1.3\n")
        result = runner.invoke(main, [
            "test", "data.txt", "--k", "1", "--m", "1",
            "--reps", "2000", "--seed", "7",
        ])
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["decision"] == "not discordant"


def test_discordancy_test_error_paths(runner):
    with runner.isolated_filesystem():
        Path("flat.txt").write_text("5.0\n5.0\n5.0\n")
        base = ["--m", "1", "--reps", "100", "--seed", "1"]
        result = runner.invoke(main, ["test", "flat.txt", "--k", "1"] + base)
        assert result.exit_code == 2  # degenerate sample
        result = runner.invoke(main, ["test", "flat.txt", "--k", "3"] + base)
        assert result.exit_code == 2  # k = n
        Path("bad.txt").write_text("1.0\ntwo\n3.0\n")
        result = runner.invoke(main, ["test", "bad.txt", "--k", "1"] + base)
        assert result.exit_code == 2  # parse error
        result = runner.invoke(main, ["test", "missing.txt", "--k", "1"] + base)
        assert result.exit_code == 2  # no such file
        Path("short.txt").write_text("1.0\n")
        result = runner.invoke(main, ["test", "short.txt", "--k", "1"] + base)
        assert result.exit_code == 2  # not enough observations


def test_power_sweep_null_row_near_alpha(runner):
    with runner.isolated_filesystem():
        result = invoke(runner, [
            "power", "--n", "5", "--m", "1", "--k", "1", "--b", "1,8",
            "--alpha", "0.05", "--reps", "2000", "--seed", "21",
        ])
        assert result.exit_code == 0
        lines = [ln for ln in Path("power.csv").read_text().splitlines()
                 if not ln.startswith("#")]
        assert lines[0] == "b,power,se"
        rows = [tuple(map(float, ln.split(","))) for ln in lines[1:]]
        assert rows[0][0] == 1.0 and rows[1][0] == 8.0
        assert abs(rows[0][1] - 0.05) < 3 * (0.05 * 0.95 / 2000) ** 0.5
        assert rows[1][1] > rows[0][1]


def test_power_rejects_contraction(runner):
    result = runner.invoke(main, ["power", "--n", "5", "--m", "1", "--k", "1",
                                  "--b", "0.5", "--seed", "1"])
    assert result.exit_code == 2
