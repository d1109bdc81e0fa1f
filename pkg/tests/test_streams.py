"""Tests for stream generation, CSV loading and multistream scenarios."""
import numpy as np
import pytest

from streams import (
    DataBatch,
    InstanceStream,
    Multistream,
    ScenarioConfig,
    ScenarioError,
    StreamError,
    StreamParseError,
    build_multistream_scenario,
    gaussian_log_scores,
    generate_synthetic,
    hyperplane_label,
    load_csv_schema,
    load_csv_stream,
    sea_label,
    synthetic_scenario,
)


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_sea_rule_class_one_below_theta():
    """f1 + f2 = 3 <= 4 gives class 1."""
    assert sea_label(np.array([1.0, 2.0, 5.0]), 4.0) == 1


def test_sea_rule_class_zero_above_theta():
    assert sea_label(np.array([4.0, 4.0, 0.0]), 4.0) == 0


def test_sea_rule_flips_across_change_point():
    """x = (3, 3, .) is class 0 under theta 4 and class 1 under theta 7."""
    x = np.array([3.0, 3.0, 1.0])
    assert sea_label(x, 4.0) == 0
    assert sea_label(x, 7.0) == 1


def test_sea_stream_follows_schedule_at_change_point():
    config = ScenarioConfig(kind="SEA", n_sources=1, samples_per_stream=100, change_points=[100],
                            noise=0.0, seed=3)
    stream = generate_synthetic("SEA", config)
    before = stream.X[:100, 0] + stream.X[:100, 1] <= 4.0
    after = stream.X[100:, 0] + stream.X[100:, 1] <= 7.0
    np.testing.assert_array_equal(stream.y[:100], before.astype(int))
    np.testing.assert_array_equal(stream.y[100:], after.astype(int))


def test_sea_features_in_range():
    stream = generate_synthetic("sea", ScenarioConfig(samples_per_stream=200, n_sources=1, seed=1))
    assert stream.dimension == 3
    assert stream.X.min() >= 0.0 and stream.X.max() <= 10.0


def test_hyperplane_rule():
    assert hyperplane_label(np.array([1.0, 1.0]), np.array([0.5, 0.5]), 0.5) == 1
    assert hyperplane_label(np.array([0.0, 0.0]), np.array([0.5, 0.5]), 0.5) == 0


@pytest.mark.parametrize("kind", ["SEA", "TREE", "RBF", "HYPERPLANE"])
def test_generators_are_deterministic(kind):
    config = ScenarioConfig(kind=kind, n_sources=1, samples_per_stream=150, seed=7)
    first = generate_synthetic(kind, config)
    second = generate_synthetic(kind, config)
    np.testing.assert_array_equal(first.X, second.X)
    np.testing.assert_array_equal(first.y, second.y)
    assert len(first) == 300


@pytest.mark.parametrize("kind", ["SEA", "TREE"])
def test_gradual_drift_is_deterministic(kind):
    config = ScenarioConfig(kind=kind, n_sources=1, samples_per_stream=400, drift_style="gradual",
                            drift_width=50, seed=2)
    np.testing.assert_array_equal(generate_synthetic(kind, config).y, generate_synthetic(kind, config).y)


def test_unknown_generator():
    with pytest.raises(ScenarioError):
        generate_synthetic("AGRAWAL", ScenarioConfig(samples_per_stream=10, n_sources=1))


def test_change_point_beyond_stream():
    config = ScenarioConfig(kind="SEA", n_sources=1, samples_per_stream=50, change_points=[500])
    with pytest.raises(ScenarioError):
        generate_synthetic("SEA", config)


def test_change_points_must_increase():
    config = ScenarioConfig(kind="SEA", n_sources=1, samples_per_stream=50, change_points=[40, 20])
    with pytest.raises(ScenarioError):
        generate_synthetic("SEA", config)


def test_load_csv_three_rows(tmp_path):
    data = _write(tmp_path / "d.csv", "a,b,label\n1.0,2.0,yes\n3.0,4.0,no\n5.0,6.0,yes\n")
    schema = _write(tmp_path / "d.schema", "FEATURE_COLUMNS=a,b\nLABEL_COLUMN=label\nCLASS_MAP=no:0,yes:1\n")
    stream = load_csv_stream(data, load_csv_schema(schema))
    assert len(stream) == 3
    assert stream.dimension == 2
    np.testing.assert_array_equal(stream.y, [1, 0, 1])
    np.testing.assert_array_equal(stream.timestamps, [0, 1, 2])


def test_load_csv_unlabeled(tmp_path):
    data = _write(tmp_path / "d.csv", "a,b\n1.0,2.0\n3.0,4.0\n")
    schema = _write(tmp_path / "d.schema", "FEATURE_COLUMNS=a,b\n")
    stream = load_csv_stream(data, load_csv_schema(schema))
    assert not stream.is_labeled
    assert all(instance.label is None for instance in stream)


def test_load_csv_parse_error_names_row_and_column(tmp_path):
    data = _write(tmp_path / "d.csv", "1.0,abc,1\n")
    schema = _write(tmp_path / "d.schema", "HEADER=false\nFEATURE_COLUMNS=0,1\nLABEL_COLUMN=2\n")
    with pytest.raises(StreamParseError) as info:
        load_csv_stream(data, load_csv_schema(schema))
    assert info.value.row == 1
    assert info.value.column == 2


def test_load_csv_unknown_class_token(tmp_path):
    data = _write(tmp_path / "d.csv", "a,label\n1.0,yes\n2.0,maybe\n")
    schema = _write(tmp_path / "d.schema", "FEATURE_COLUMNS=a\nLABEL_COLUMN=label\nCLASS_MAP=no:0,yes:1\n")
    with pytest.raises(StreamParseError) as info:
        load_csv_stream(data, load_csv_schema(schema))
    assert info.value.row == 2


def test_load_csv_missing_file(tmp_path):
    schema = _write(tmp_path / "d.schema", "FEATURE_COLUMNS=a\n")
    with pytest.raises(StreamError):
        load_csv_stream(str(tmp_path / "absent.csv"), load_csv_schema(schema))


def test_load_csv_ragged_row(tmp_path):
    data = _write(tmp_path / "d.csv", "a,b\n1.0,2.0\n3.0,4.0,5.0,6.0\n")
    schema = _write(tmp_path / "d.schema", "FEATURE_COLUMNS=a,b\n")
    with pytest.raises(StreamError):
        load_csv_stream(data, load_csv_schema(schema))


def test_load_csv_empty_file(tmp_path):
    data = _write(tmp_path / "d.csv", "")
    schema = _write(tmp_path / "d.schema", "FEATURE_COLUMNS=a\n")
    with pytest.raises(StreamError):
        load_csv_stream(data, load_csv_schema(schema))


def test_schema_class_map_needs_integer_indices(tmp_path):
    schema = _write(tmp_path / "d.schema", "FEATURE_COLUMNS=a\nLABEL_COLUMN=label\nCLASS_MAP=no:zero,yes:1\n")
    with pytest.raises(StreamError):
        load_csv_schema(schema)


def _dataset(n, d=2, seed=0):
    rng = np.random.default_rng(seed)
    return InstanceStream.from_arrays(rng.normal(size=(n, d)), rng.integers(0, 2, size=n), n_classes=2)


def test_single_source_taking_everything_leaves_empty_target():
    with pytest.raises(ScenarioError):
        build_multistream_scenario(_dataset(50), 1, [50])


def test_sizes_exceeding_dataset():
    with pytest.raises(ScenarioError):
        build_multistream_scenario(_dataset(50), 2, [30, 30])


def test_scenario_partitions_dataset():
    dataset = _dataset(300)
    scenario = build_multistream_scenario(dataset, 2, [100, 100])
    assert len(scenario.target) == 100
    stamps = [set(s.timestamps.tolist()) for s in scenario.sources] + [set(scenario.target.timestamps.tolist())]
    assert set().union(*stamps) == set(range(300))
    assert sum(len(s) for s in stamps) == 300


def test_scenario_streams_are_chronological():
    scenario = build_multistream_scenario(_dataset(300), 2, [100, 100])
    for stream in scenario.sources + [scenario.target]:
        assert np.all(np.diff(stream.timestamps) > 0)


def test_first_source_holds_highest_scores():
    dataset = _dataset(20, seed=4)
    scores = gaussian_log_scores(dataset.X)
    scenario = build_multistream_scenario(dataset, 2, [5, 5])
    top = set(np.argsort(-scores, kind="stable")[:5].tolist())
    assert set(scenario.sources[0].timestamps.tolist()) == top


def test_target_labels_are_held_out():
    dataset = _dataset(90)
    scenario = build_multistream_scenario(dataset, 2, [30, 30])
    assert not scenario.target.is_labeled
    np.testing.assert_array_equal(scenario.held_out_labels, dataset.y[scenario.target.timestamps])


def test_covariate_shift_between_streams():
    """Streams cut from the score ordering have different feature spreads."""
    scenario = synthetic_scenario(ScenarioConfig(kind="SEA", n_sources=2, samples_per_stream=500, seed=0))
    spreads = [np.abs(s.X - 5.0).mean() for s in scenario.sources + [scenario.target]]
    assert spreads[0] < spreads[1] < spreads[2]


def test_multistream_rejects_labeled_target():
    dataset = _dataset(20)
    with pytest.raises(ScenarioError):
        Multistream([dataset], dataset, np.zeros(20))


def test_batch_needs_two_rows():
    with pytest.raises(StreamError):
        DataBatch(np.zeros((1, 2)))


def test_batch_keeps_timestamp_order():
    with pytest.raises(StreamError):
        DataBatch(np.zeros((3, 1)), timestamps=[0, 2, 1])
