import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from coexsim.config import SimConfig
from coexsim.errors import ConfigError, DegenerateGeometryError
from coexsim.geometry import (RadarState, RegionSpec, boresight_at, off_axis_radar, off_axis_wifi,
                              sample_drop, wrap_angle)

coords = st.floats(-5000, 5000, allow_nan=False)


def test_default_layout_counts():
    layout = sample_drop(SimConfig(), np.random.default_rng(0))
    assert layout.ap_positions.shape == (100, 2)
    assert layout.sta_mask.sum() == 1000
    assert np.all(layout.sta_counts == 10)


def test_minimal_layout():
    cfg = SimConfig(lambda_ap=1, lambda_sta=1)
    layout = sample_drop(cfg, np.random.default_rng(1))
    ap = layout.ap_positions[0]
    sta = layout.sta_positions[0, 0]
    assert np.hypot(*(ap - (cfg.d, 0))) <= cfg.r_reg
    assert 0 < np.hypot(*(sta - ap)) <= cfg.r_net


def test_stas_inside_network_disc():
    cfg = SimConfig()
    layout = sample_drop(cfg, np.random.default_rng(2))
    dist = np.hypot(*(layout.sta_positions - layout.ap_positions[:, None, :]).transpose(2, 0, 1))
    assert np.all(dist <= cfg.r_net)
    assert np.all(dist > 0)


def test_ap_mean_x_matches_region_centre():
    # 1e5 APs in one layout have the same law as one AP over 1e5 drops
    cfg = SimConfig(lambda_ap=100_000, lambda_sta=1)
    x = sample_drop(cfg, np.random.default_rng(3)).ap_positions[:, 0]
    # x of a uniform point on a disc has variance R^2 / 4
    se = cfg.r_reg / 2 / np.sqrt(x.size)
    assert abs(x.mean() - cfg.d) < 3 * se


def test_ap_positions_uniform_over_equal_area_rings():
    cfg = SimConfig(lambda_ap=100_000, lambda_sta=1)
    aps = sample_drop(cfg, np.random.default_rng(4)).ap_positions
    u = np.hypot(aps[:, 0] - cfg.d, aps[:, 1]) ** 2 / cfg.r_reg**2
    counts = np.bincount(np.minimum((u * 20).astype(int), 19), minlength=20)
    assert stats.chisquare(counts).pvalue > 0.01


def test_poisson_counts_vary():
    cfg = SimConfig(poisson_counts=True)
    sizes = {sample_drop(cfg, np.random.default_rng(s)).n_ap for s in range(10)}
    assert len(sizes) > 1


def test_radar_inside_region_rejected():
    with pytest.raises(ConfigError):
        SimConfig(d=900.0)


@pytest.mark.parametrize("rpm,t,expected", [(60, 1.0, 0.0), (15, 1.0, np.pi / 2), (15, 0.0, 0.0)])
def test_boresight_examples(rpm, t, expected):
    got = boresight_at(RadarState(rpm), t)
    assert np.isclose(np.cos(got), np.cos(expected)) and np.isclose(np.sin(got), np.sin(expected))
    assert 0.0 <= got < 2 * np.pi


def test_boresight_negative_time():
    with pytest.raises(ValueError):
        boresight_at(RadarState(15), -1.0)


@given(st.floats(0, 1e4), st.floats(1, 60))
def test_boresight_periodic(t, rpm):
    radar = RadarState(rpm)
    a, b = boresight_at(radar, t), boresight_at(radar, t + 60 / rpm)
    assert abs(wrap_angle(a - b)) < 1e-6


@pytest.mark.parametrize("target,expected", [((900, 0), 0.0), ((1100, 0), np.pi), ((1000, 100), np.pi / 2)])
def test_off_axis_wifi_examples(target, expected):
    assert off_axis_wifi((1000, 0), target, (0, 0)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("node,boresight,expected",
                         [((1000, 0), 0.0, 0.0), ((1000, 0), np.pi / 2, np.pi / 2), ((1000, 1000), 0.0, np.pi / 4)])
def test_off_axis_radar_examples(node, boresight, expected):
    assert off_axis_radar(node, RadarState(15, boresight)) == pytest.approx(expected, abs=1e-12)


def test_degenerate_vectors():
    with pytest.raises(DegenerateGeometryError):
        off_axis_wifi((1, 1), (1, 1))
    with pytest.raises(DegenerateGeometryError):
        off_axis_radar((0, 0), RadarState(15))


@given(coords, coords, coords, coords)
def test_off_axis_wifi_reflection_symmetry(x, y, tx_, ty):
    if np.hypot(x, y) < 1 or np.hypot(tx_ - x, ty - y) < 1:
        return
    a = off_axis_wifi((x, y), (tx_, ty))
    b = off_axis_wifi((x, -y), (tx_, -ty))
    assert 0 <= a <= np.pi
    assert a == pytest.approx(b, abs=1e-9)


@given(coords, coords, st.floats(0, 2 * np.pi, exclude_max=True))
def test_off_axis_radar_reflection_symmetry(x, y, phi):
    if np.hypot(x, y) < 1:
        return
    a = off_axis_radar((x, y), RadarState(15, phi))
    b = off_axis_radar((x, -y), RadarState(15, (2 * np.pi - phi) % (2 * np.pi)))
    assert a == pytest.approx(b, abs=1e-9)


def test_off_axis_wifi_matches_arccos_definition():
    rng = np.random.default_rng(5)
    tx, tgt = rng.normal(size=(2, 500, 2)) * 1000
    u, v = tgt - tx, -tx
    ref = np.arccos(np.clip(np.sum(u * v, 1) / np.linalg.norm(u, axis=1) / np.linalg.norm(v, axis=1), -1, 1))
    np.testing.assert_allclose(off_axis_wifi(tx, tgt), ref, atol=1e-7)


def test_region_spec():
    region = RegionSpec.at_distance(2000, 1000, 112.84)
    assert region.distance == 2000
    assert region.area == pytest.approx(np.pi * 1e6)
