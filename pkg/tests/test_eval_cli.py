"""Tests for metrics, experiment configuration, reports, sweeps and the command line."""
import json

import numpy as np
import pandas as pd
import pytest

from eval_cli import (
    ConfigError,
    EvaluationError,
    ExperimentConfig,
    accuracy_trajectory,
    build_config,
    load_config_file,
    mean_std,
    parameter_sweep,
    parse_int_list,
    prequential_accuracy,
    run_experiment,
    trajectory_mean,
)
from eval_cli.cli import main
from eval_cli.experiment import REPORT_COLUMNS, build_scenario
from eval_cli.sweep import resolve_parameter
from obal_engine import run_obal
from streams import Multistream

SMALL = dict(dataset="SEA", n_sources=2, samples_per_stream=400, window_size=50, max_iterations=3,
             pool_size=5, n_components=1, base_learner="naive_bayes", seeds=[0], trajectory_window=100)

SMALL_FLAGS = ["--dataset", "SEA", "--n-sources", "2", "--samples-per-stream", "400", "--L-n", "50",
               "--I-max", "3", "--n-components", "1", "--base-learner", "naive_bayes"]


def _small(**overrides):
    return ExperimentConfig(**{**SMALL, **overrides})


# ==================== METRICS ====================

def test_all_correct_is_hundred():
    assert prequential_accuracy([0, 1, 1, 0], [0, 1, 1, 0]) == 100.0


def test_alternating_is_fifty():
    assert prequential_accuracy([0, 0, 0, 0, 0, 0], [0, 1, 0, 1, 0, 1]) == 50.0


def test_nine_of_ten():
    assert prequential_accuracy([1] * 10, [1] * 9 + [0]) == 90.0


def test_length_mismatch():
    with pytest.raises(EvaluationError):
        prequential_accuracy([0, 1], [0])


def test_mask_selects_positions():
    mask = np.array([True, False, True])
    assert prequential_accuracy([0, 1, 1], [0, 0, 1], mask) == 100.0


def test_trajectory_has_one_point_per_window():
    rng = np.random.default_rng(0)
    predictions, labels = rng.integers(0, 2, 2500), rng.integers(0, 2, 2500)
    points = accuracy_trajectory(predictions, labels, 1000)
    assert len(points) == 3
    assert [p.n for p in points] == [1000, 1000, 500]
    assert trajectory_mean(points) == pytest.approx(prequential_accuracy(predictions, labels))


def test_mean_std_over_seeds():
    assert mean_std([80.0, 90.0]) == pytest.approx((85.0, np.sqrt(50.0)))
    assert mean_std([70.0]) == (70.0, 0.0)


# ==================== CONFIGURATION ====================

def test_seed_ranges():
    assert parse_int_list("0-9") == list(range(10))
    assert parse_int_list("1,3,5") == [1, 3, 5]


def test_dataset_defaults_apply():
    resolved = ExperimentConfig(dataset="rbf").resolved()
    assert (resolved.window_size, resolved.max_iterations, resolved.pool_size) == (300, 4, 10)


def test_config_file_overrides_flags(tmp_path):
    path = tmp_path / "exp.env"
    path.write_text("L_N=120\nVARIANT=v2\nSEEDS=0-2\n", encoding="utf-8")
    config = build_config({"window_size": 80, "variant": "v3", "pool_size": 7}, str(path))
    assert config.window_size == 120
    assert config.variant == "v2"
    assert config.seeds == [0, 1, 2]
    assert config.pool_size == 7


def test_config_file_resolves_relative_paths(tmp_path):
    path = tmp_path / "real.env"
    path.write_text("DATASET=WEATHER\nCSV_PATH=weather.csv\nSCHEMA=weather.schema\n", encoding="utf-8")
    overrides = load_config_file(str(path))
    assert overrides["csv_path"] == str(tmp_path / "weather.csv")
    assert overrides["dataset"] == "WEATHER"


def test_unknown_config_key(tmp_path):
    path = tmp_path / "bad.env"
    path.write_text("LEARNING_RATE=0.1\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config_file(str(path))


@pytest.mark.parametrize("overrides", [
    {"variant": "v9"},
    {"seeds": []},
    {"dataset": "KITTI"},
    {"window_size": 3, "max_iterations": 3},
])
def test_invalid_configs(overrides):
    with pytest.raises(ConfigError):
        _small(**overrides).validate()


def test_variant_switches():
    engine = _small(variant="v3").engine_config(0)
    assert engine.drift_handling and engine.align and not engine.reweight
    engine = _small(variant="v1").engine_config(0)
    assert not (engine.drift_handling or engine.align or engine.reweight)


# ==================== EXPERIMENTS ====================

def test_report_shape():
    report = run_experiment(_small(seeds=[0, 1]))
    frame = report.to_frame()
    assert list(frame.columns) == REPORT_COLUMNS
    assert list(frame["seed"]) == ["0", "1", "summary"]
    assert all(0.0 <= a <= 100.0 for a in report.accuracies)
    assert report.results[0].n_predictions == 400 - 50


def test_trajectory_matches_overall_accuracy():
    result = run_experiment(_small()).results[0]
    assert len(result.trajectory) == int(np.ceil(result.n_predictions / 100))
    assert trajectory_mean(result.trajectory) == pytest.approx(result.accuracy)


def test_reports_are_byte_identical(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    run_experiment(_small(report=str(first)))
    run_experiment(_small(report=str(second)))
    assert first.read_bytes() == second.read_bytes()
    assert (tmp_path / "a_trajectory.csv").read_bytes() == (tmp_path / "b_trajectory.csv").read_bytes()


def test_corrupted_labels_leave_predictions_unchanged():
    config = _small().resolved()
    scenario = build_scenario(config, 0)
    corrupted = Multistream(scenario.sources, scenario.target, 1 - scenario.held_out_labels)
    first = run_obal(scenario.sources, scenario.target, config.engine_config(0))
    second = run_obal(corrupted.sources, corrupted.target, config.engine_config(0))
    np.testing.assert_array_equal(first.predictions, second.predictions)


# ==================== SWEEPS ====================

def test_pool_size_sweep_respects_capacity():
    table = parameter_sweep(_small(), "P", [1, 5])
    frame = table.to_frame()
    assert list(frame["value"]) == [1, 5]
    assert all(frame["max_pool_size"] <= frame["value"])


def test_single_iteration_sweep_completes():
    frame = parameter_sweep(_small(), "I_max", [1]).to_frame()
    assert len(frame) == 1
    assert 0.0 <= frame["mean_accuracy"].iloc[0] <= 100.0


def test_window_sweep_rows_follow_values(tmp_path):
    table = parameter_sweep(_small(), "L_n", [40, 60])
    path = table.write_csv(str(tmp_path / "sweep.csv"))
    frame = pd.read_csv(path)
    assert list(frame["value"]) == [40, 60]
    assert set(frame["parameter"]) == {"L_n"}


def test_unknown_sweep_parameter():
    with pytest.raises(ConfigError):
        resolve_parameter("learning_rate")


def test_empty_sweep_values():
    with pytest.raises(ConfigError):
        parameter_sweep(_small(), "P", [])


# ==================== COMMAND LINE ====================

def test_cli_run_writes_report(tmp_path):
    out = tmp_path / "report.csv"
    assert main(["run", *SMALL_FLAGS, "--seed", "0", "--out", str(out)]) == 0
    frame = pd.read_csv(out)
    assert frame["seed"].iloc[-1] == "summary"


def test_cli_run_requires_seed(tmp_path):
    with pytest.raises(SystemExit):
        main(["run", *SMALL_FLAGS, "--out", str(tmp_path / "r.csv")])


def test_cli_reports_configuration_errors(tmp_path):
    code = main(["run", "--dataset", "KITTI", "--seed", "0", "--out", str(tmp_path / "r.csv")])
    assert code == 1


def test_cli_generate_writes_streams(tmp_path):
    assert main(["generate", *SMALL_FLAGS, "--seed", "3", "--out-dir", str(tmp_path)]) == 0
    target = pd.read_csv(tmp_path / "target.csv")
    labels = pd.read_csv(tmp_path / "target_labels.csv")
    source = pd.read_csv(tmp_path / "source_0.csv")
    assert "label" not in target.columns
    assert len(target) == len(labels) == 400
    assert list(source.columns) == ["x0", "x1", "x2", "label"]
    assert (tmp_path / "source_1.csv").exists()


def test_cli_inspect_summarizes_events(tmp_path, capsys):
    events = tmp_path / "events.ndjson"
    assert main(["run", *SMALL_FLAGS, "--seed", "0", "--out", str(tmp_path / "r.csv"),
                 "--events", str(events)]) == 0
    capsys.readouterr()
    assert main(["inspect", "--events", str(events)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert isinstance(summary, dict)


def test_cli_inspect_missing_log(tmp_path):
    assert main(["inspect", "--events", str(tmp_path / "absent.ndjson")]) == 1
