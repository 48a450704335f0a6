import csv
import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from relgd.cli import bounds_report, main
from relgd.experiments import (
    SUMMARY_COLUMNS,
    TRACE_COLUMNS,
    ExperimentConfig,
    load_config,
    preset_names,
    run_experiment,
)


def write_config(tmp_path, **overrides):
    data = {
        "name": "quad",
        "function": {"kind": "quadratic", "eigenvalues": [1.0, 1.0]},
        "solver": "adaptive_L",
        "x0": [1.0, 0.0],
        "alphas": [0.0],
        "L_min": 1.0,
        "L_0": 1.0,
        "epsilon": 1e-12,
        "iterations": 20,
        "seeds": [0],
    }
    data.update(overrides)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    return path


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


class TestConfig:
    def test_presets_shipped(self):
        assert {"rosenbrock_t1", "rosenbrock_t2", "ns_t3", "ns_t4", "ns_t5", "ns_t6"} <= set(preset_names())

    def test_rosenbrock_preset_fields(self):
        cfg = load_config("rosenbrock_t1")
        assert cfg.alphas == [0.001, 0.01, 0.1, 0.3, 0.5, 1.0]
        assert (cfg.L_min, cfg.L_0, cfg.alpha_min, cfg.alpha_0) == (0.01, 1.0, 0.001, 0.01)
        assert np.array_equal(cfg.start_point(), np.zeros(2))
        assert len(cfg.seeds) == 11

    def test_ns_start_point(self):
        x0 = load_config("ns_t5").start_point()
        assert x0[0] == -1.0 and np.all(x0[1:] == 1.0) and x0.size == 100

    @pytest.mark.parametrize(
        "overrides, field",
        [
            ({"alphas": []}, "alphas"),
            ({"seeds": []}, "seeds"),
            ({"alphas": [-1.0]}, "alphas"),
            ({"L_min": -1.0}, "L_min"),
            ({"solver": "newton"}, "solver"),
            ({"unknown_key": 1}, "unknown_key"),
        ],
    )
    def test_validation_names_field(self, tmp_path, overrides, field):
        path = write_config(tmp_path, **overrides)
        with pytest.raises(ValidationError) as exc:
            load_config(path)
        assert field in str(exc.value)

    def test_adaptive_L_needs_alpha_below_half(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(function={"kind": "rosenbrock"}, solver="adaptive_L", alphas=[0.5])
        cfg = ExperimentConfig(function={"kind": "rosenbrock"}, solver="adaptive_L",
                               alphas=[0.5], alpha=0.3)
        assert cfg.assumed_alpha(0.5) == 0.3


class TestCommands:
    def test_smoke_quadratic(self, tmp_path):
        path = write_config(tmp_path)
        assert main(["run", str(path), "--out-dir", str(tmp_path / "o")]) == 0
        rows = read_csv(tmp_path / "o" / "traces" / "quad_alpha=0.0_seed=0.csv")
        assert tuple(rows[0]) == TRACE_COLUMNS
        assert len(rows) >= 3
        f = [float(r[1]) for r in rows[1:]]
        assert all(b <= a for a, b in zip(f, f[1:]))

    def test_invalid_config_exit_1(self, tmp_path, capsys):
        path = write_config(tmp_path, L_min=-1.0)
        assert main(["sweep", str(path)]) == 1
        assert "L_min" in capsys.readouterr().err

    def test_missing_config_exit_2(self, tmp_path):
        assert main(["sweep", str(tmp_path / "nope.json")]) == 2

    def test_unwritable_out_dir_exit_2(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        path = write_config(tmp_path)
        assert main(["sweep", str(path), "--out-dir", str(blocker / "sub")]) == 2

    def test_divergence_exit_3_writes_outputs(self, tmp_path):
        path = write_config(tmp_path, solver="constant_step", L=1e-3, epsilon=None, iterations=1000)
        out = tmp_path / "o"
        assert main(["sweep", str(path), "--out-dir", str(out)]) == 3
        summary = read_csv(out / "summary.csv")
        assert summary[1][5] == "Diverged"

    def test_overrides(self, tmp_path):
        path = write_config(tmp_path, epsilon=None, alphas=[0.0, 0.2])
        out = tmp_path / "o"
        assert main(["sweep", str(path), "--out-dir", str(out), "--seed-count", "3",
                     "--iterations", "7", "--solver", "adaptive_L_alpha"]) == 0
        summary = read_csv(out / "summary.csv")
        assert tuple(summary[0]) == SUMMARY_COLUMNS
        runs = [r for r in summary[1:] if r[1] != "median"]
        medians = [r for r in summary[1:] if r[1] == "median"]
        assert len(runs) == 6 and len(medians) == 2
        assert all(r[4] == "7" for r in runs)
        curves = read_csv(out / "curves.csv")
        assert curves[0] == ["k", "alpha=0.0", "alpha=0.2"]
        assert len(curves) == 1 + 8

    def test_medians_deterministic_from_finals(self, tmp_path):
        path = write_config(tmp_path, epsilon=None, alphas=[0.3], seeds=[0, 1, 2, 3, 4],
                            function={"kind": "rosenbrock"}, x0=[0.0, 0.0], L_min=0.01,
                            solver="adaptive_L_alpha", iterations=50)
        out = tmp_path / "o"
        main(["sweep", str(path), "--out-dir", str(out)])
        rows = read_csv(out / "summary.csv")[1:]
        finals = [float(r[2]) for r in rows if r[1] != "median"]
        median = [float(r[2]) for r in rows if r[1] == "median"][0]
        assert median == float(np.median(finals))

    def test_table_list(self, capsys):
        assert main(["table", "list"]) == 0
        assert "ns_t6" in capsys.readouterr().out

    def test_table_preset(self, tmp_path, capsys):
        assert main(["table", "ns_t3", "--seed-count", "2", "--out-dir", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "reference" in out and "0.058" in out


class TestBounds:
    def test_unit_quadratic(self, tmp_path):
        path = write_config(tmp_path, x0=[1.0, 1.0], epsilon=1e-3, L_min=1.0)
        text = "\n".join(bounds_report(load_config(path)))
        gap = 1.0
        assert "xi = 1.0" in text
        assert "L_max (adaptive L) = 2.0" in text
        assert "L_max (adaptive L, alpha) = 2.0" in text
        assert f"trajectory radius (adaptive L) = {4 * math.sqrt(2 * gap)!r}" in text

    def test_rosenbrock_unknown_markers(self, capsys):
        assert main(["bounds", "rosenbrock_t1"]) == 0
        out = capsys.readouterr().out
        assert "mu unknown" in out and "L unknown" in out
        assert "N* =" not in out
        assert "no guarantee for alpha >= 0.5" in out

    def test_quadratic_with_mu(self, capsys):
        assert main(["bounds", "quadratic_demo"]) == 0
        out = capsys.readouterr().out
        assert "N* =" in out and "N** =" in out and "mu unknown" not in out


def test_run_experiment_cells():
    cfg = ExperimentConfig(function={"kind": "rosenbrock"}, x0=[0.0, 0.0],
                           alphas=[0.1, 1.0], seeds=[0, 1], iterations=20)
    result = run_experiment(cfg)
    assert [(c.alpha, c.seed) for c in result.cells] == [(0.1, 0), (0.1, 1), (1.0, 0), (1.0, 1)]
    assert not result.any_failed
