import math

import numpy as np
import pytest

import couplemap as cm


def test_map_pair_example():
    pair = cm.align_pair(cm.TimeSeries([1, 2, 3, 1]), cm.TimeSeries([1, 3, 3, 2]))
    net = cm.map_pair(pair, 3)
    assert net.sample_count == 4
    np.testing.assert_array_equal(net.weights, [[1, 1, 0], [0, 0, 1], [0, 0, 1]])
    assert net.joint_probability()[1, 2] == 0.25


def test_lagged_network_and_measures():
    s = cm.generate_fgn(0.5, 500, seed=3)
    assert len(s) == 500
    assert s.kind == cm.SeriesKind.standardized
    net = cm.map_lagged(s, 1, 20)
    values, flags = cm.measure_all(net)
    assert tuple(values) == cm.MEASURE_NAMES
    assert values["mean_k_out"] == pytest.approx(values["mean_k_total"] / 2)
    assert values["deformation_R"] == pytest.approx(cm.deformation_ratio(net))
    assert isinstance(flags, list)


def test_network_from_weights():
    net = cm.CouplingNetwork(np.array([[0, 2], [1, 0]]))
    assert net.sample_count == 3
    assert net.transposed() == cm.CouplingNetwork([[0, 1], [2, 0]])
    assert len(cm.detect_communities(net)) == 2


def test_surrogate_keeps_amplitudes():
    s = cm.TimeSeries(np.random.default_rng(1).standard_t(3, 256))
    a, _ = cm.spectrum(s)
    b, _ = cm.spectrum(cm.surrogate(s, 7))
    np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-14)
    assert cm.surrogate(s, 7) == cm.surrogate(s, 7)


def test_confidence_interval():
    mean, half = cm.confidence_interval([1, 2, 3])
    assert mean == 2.0
    assert half == pytest.approx(0.9497, abs=1e-4)
    assert cm.z_score(0.90) == pytest.approx(1.6449, abs=1e-4)


def test_small_ensemble_and_radar():
    systems = cm.run_fgn_ensemble([0.3, 0.5], replicas_per_h=4, series_length=300, bin_count=15, seed=2)
    assert [s.system for s in systems] == ["fGn(H=0.3)", "fGn(H=0.5)"]
    assert systems[1].row("mean_k_total").n == 4
    means = [(s.system, {r.measure_name: r.mean for r in s.rows}) for s in systems]
    radar = cm.radar_normalize(means)
    assert radar["fGn(H=0.5)"][1] == 0.0
    assert math.isfinite(radar["fGn(H=0.3)"][1])


def test_surrogate_pair_summary():
    x = cm.generate_fgn(0.6, 400, seed=1)
    y = cm.generate_fgn(0.6, 400, seed=2)
    summary = cm.run_surrogate_pair(cm.align_pair(x, y), replicas=4, bin_count=12, system="pair")
    assert summary.system == "pair"
    assert len(summary.rows) == len(cm.MEASURE_NAMES)


def test_dated_series_and_returns(tmp_path):
    s = cm.TimeSeries.from_dates(["2020-01-02", "2020-01-03", "2020-01-06"], [100.0, 101.0, 99.0])
    r = cm.log_returns(s)
    assert len(r) == 2
    assert r.values[0] == pytest.approx(math.log(1.01))
    path = tmp_path / "s.csv"
    s.save_csv(path)
    assert cm.TimeSeries.load_csv(path) == s


def test_errors_carry_kind():
    with pytest.raises(cm.CouplemapError) as info:
        cm.generate_fgn(1.5, 100)
    assert info.value.kind == "InvalidArgument"
    with pytest.raises(cm.CouplemapError) as info:
        cm.log_returns(cm.TimeSeries([1.0, -2.0]))
    assert info.value.kind == "NonPositiveValue"
