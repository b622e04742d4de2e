"""Command line behavior: outputs, formats, config handling, exit codes."""
from __future__ import annotations

import csv
import math

import numpy as np
import pytest

from cheshire import acceptance, cli


def read_rows(path):
    with open(path) as fh:
        comment = fh.readline()
        assert comment.startswith("# ")
        return comment, list(csv.DictReader(fh))


def test_photon_cat_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    assert cli.main(["photon-cat", "--out", str(out)]) == 0
    for name in ("density.csv", "component_sum.csv", "component_difference.csv",
                 "summary.csv", "weak_values.csv", "density.pgm", "density.png",
                 "component_sum.png", "component_difference.png"):
        assert (out / name).exists(), name
    _, rows = read_rows(out / "summary.csv")
    summary = {r["quantity"]: r["value"] for r in rows}
    assert abs(float(summary["postselect_probability"]) - 0.2524751658366556) < 1e-12
    assert float(summary["baseline_probability"]) == 0.25
    assert abs(float(summary["centroid_y"]) - 0.09901963988083608) < 1e-12
    assert "lobe_weights" in summary  # weak run, lobes overlap
    out_text = capsys.readouterr().out
    assert "post-selection probability" in out_text


def test_component_fields_match_direct_evaluation(tmp_path):
    out = tmp_path / "run"
    assert cli.main(["photon-cat", "--out", str(out), "--format", "csv",
                     "--grid-n", "256"]) == 0
    _, rows = read_rows(out / "component_sum.csv")
    values = np.array([float(r["value"]) for r in rows])
    xs = np.array([float(r["x"]) for r in rows])
    ys = np.array([float(r["y"]) for r in rows])
    direct = 2.0 * np.exp(-xs ** 2) * np.exp(-(ys - 0.1) ** 2)
    assert np.max(np.abs(values - direct)) < 1e-12
    # peak close to 2 but the grid does not sample x = 0 exactly
    assert 1.99 < values.max() <= 2.0
    _, rows = read_rows(out / "component_difference.csv")
    diff_max = max(float(r["value"]) for r in rows)
    assert abs(diff_max - acceptance.DIFF_TERM_MAX) < 5e-3


def test_format_filter(tmp_path):
    out = tmp_path / "csv_only"
    assert cli.main(["photon-cat", "--out", str(out), "--format", "csv",
                     "--grid-n", "160"]) == 0
    assert (out / "density.csv").exists()
    assert not (out / "density.png").exists()
    assert not (out / "density.pgm").exists()
    out2 = tmp_path / "png_only"
    assert cli.main(["photon-cat", "--out", str(out2), "--format", "png",
                     "--grid-n", "160"]) == 0
    assert not (out2 / "density.csv").exists()
    assert (out2 / "density.png").exists()


def test_photon_cat_strong_regime_reports_lobes(tmp_path):
    out = tmp_path / "strong"
    assert cli.main(["photon-cat", "--out", str(out), "--dx", "5", "--dy", "5",
                     "--format", "csv", "--grid-n", "160"]) == 0
    _, rows = read_rows(out / "summary.csv")
    summary = {r["quantity"]: r["value"] for r in rows}
    assert "lobe_weights" not in summary
    weights = sorted(float(summary[f"lobe_{i}_weight"]) for i in range(3))
    assert abs(weights[2] - 2.0 / 3.0) < 1e-3


def test_pgm_header(tmp_path):
    out = tmp_path / "run"
    assert cli.main(["photon-cat", "--out", str(out), "--format", "pgm"]) == 0
    blob = (out / "density.pgm").read_bytes()
    assert blob.startswith(b"P5\n512 512\n255\n")
    assert len(blob) == len(b"P5\n512 512\n255\n") + 512 * 512
    assert max(blob[15:]) == 255


def test_cli_runs_are_byte_identical(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert cli.main(["photon-cat", "--out", str(out), "--grid-n", "160"]) == 0
        assert cli.main(["neutron-cat", "--out", str(out), "--samples", "200"]) == 0
    names = sorted(p.name for p in out1.iterdir())
    assert "density.png" in names and "sweep_baseline.csv" in names
    for name in names:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


def test_neutron_cat_outputs(tmp_path):
    out = tmp_path / "run"
    assert cli.main(["neutron-cat", "--out", str(out), "--chi-steps", "64"]) == 0
    for cfg in ("baseline", "absorber-I", "absorber-II", "field-I", "field-II"):
        assert (out / f"sweep_{cfg}.csv").exists()
    assert (out / "visibility_summary.csv").exists()
    assert (out / "sweeps.png").exists()
    _, rows = read_rows(out / "visibility_summary.csv")
    vis = {r["config"]: (float(r["visibility_d1"]), float(r["visibility_d2"]))
           for r in rows}
    assert abs(vis["baseline"][0]) < 1e-12 and abs(vis["baseline"][1]) < 1e-12
    b = math.sin(0.1)
    assert abs(vis["field-I"][0] - 2.0 * b / (1.0 + b * b)) < 1e-12
    assert vis["field-II"][0] < 1e-12
    _, sweep = read_rows(out / "sweep_absorber-II.csv")
    for r in sweep:
        assert abs(float(r["p_d1"]) - 0.5 / 4.0) < 1e-14
    assert "n_d1" not in sweep[0]


def test_neutron_counts_columns(tmp_path):
    out = tmp_path / "run"
    assert cli.main(["neutron-cat", "--out", str(out), "--chi-steps", "16",
                     "--samples", "300", "--format", "csv"]) == 0
    _, sweep = read_rows(out / "sweep_baseline.csv")
    for r in sweep:
        total = sum(int(r[k]) for k in ("n_d1", "n_d2", "n_absorbed", "n_rejected"))
        assert total == 300


def test_weak_values_command(tmp_path, capsys):
    out = tmp_path / "run"
    assert cli.main(["weak-values", "--out", str(out), "--dx", "0.001",
                     "--dy", "0.001"]) == 0
    _, rows = read_rows(out / "weak_values.csv")
    by_name = {r["operator"]: r for r in rows}
    assert abs(float(by_name["presence_I"]["re"])) < 1e-12
    assert abs(float(by_name["spin_I"]["re"]) - 1.0) < 1e-12
    assert (out / "weak_value_shifts.png").exists()
    assert "spin_II" in capsys.readouterr().out


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text("w = 2.0\nchi-steps = 16  # comment\n\n# full line comment\n")
    out = tmp_path / "run"
    assert cli.main(["neutron-cat", "--config", str(cfg), "--w", "3.0",
                     "--out", str(out), "--format", "csv"]) == 0
    comment, rows = read_rows(out / "sweep_baseline.csv")
    assert "w=3.0" in comment  # flag wins over config
    assert "chi_steps=16" in comment
    assert len(rows) == 16


def test_usage_errors_exit_one(tmp_path, capsys):
    assert cli.main(["photon-cat", "--format", "bmp"]) == 1
    assert "usage error" in capsys.readouterr().err
    bad = tmp_path / "bad.cfg"
    bad.write_text("mystery = 4\n")
    assert cli.main(["photon-cat", "--config", str(bad)]) == 1
    assert cli.main(["photon-cat", "--config", str(tmp_path / "absent.cfg")]) == 1
    assert cli.main(["photon-cat", "--w", "-1"]) == 1
    assert cli.main(["neutron-cat", "--t", "1.5"]) == 1
    assert cli.main(["photon-cat", "--no-such-flag"]) == 1


def test_simulation_error_exits_two(tmp_path, capsys):
    out = tmp_path / "run"
    assert cli.main(["photon-cat", "--out", str(out), "--grid-n", "16"]) == 2
    assert "simulation error" in capsys.readouterr().err


def test_verify_passes(capsys):
    assert cli.main(["verify"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 11
    assert "FAIL" not in out


def test_verify_exit_three_on_failure(monkeypatch, capsys):
    failed = acceptance.CriterionResult(key="C99", name="forced", passed=False,
                                        detail="forced failure")
    monkeypatch.setattr(acceptance, "run_all", lambda seed: [failed])
    assert cli.main(["verify"]) == 3
    assert "FAIL" in capsys.readouterr().out
