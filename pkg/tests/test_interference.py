import math

import numpy as np
import pytest

from coexsim.antenna import linear_to_db
from coexsim.config import SimConfig
from coexsim.errors import ResolutionError
from coexsim.geometry import RadarState, RegionSpec
from coexsim.interference import (Annulus, Models, aggregate_profile, aggregate_wtr, campbell_cases,
                                  campbell_mean_oracle, individual_interference, max_over_rotation, mmai,
                                  offset_disc_radial_integral, power_law_ring_integral, rtw_interference,
                                  sinr_and_nppi, standard_error)
from coexsim.mac import Node, build_sweep_schedule

MODELS = Models()
RADAR = RadarState(15.0)
PEAK_WIFI_DB = 2.15 + 10 * math.log10(4)


def coastal_db(r):
    return 10 * math.log10(259) - 39.7 * math.log10(r)


def ap_facing_radar(pos, power=30.0):
    pos = np.asarray(pos, dtype=float)
    return Node(0, "AP", pos, 7, power, pos * 0.95)


def random_winners(n, seed):
    rng = np.random.default_rng(seed)
    pos = np.column_stack([rng.uniform(1000, 3000, n), rng.uniform(-1000, 1000, n)])
    tgt = pos + rng.normal(0, 50, (n, 2))
    power = np.where(rng.random(n) < 0.3, 30.0, 10.0)
    return [Node(i, "AP" if p == 30 else "STA", pos[i], 0, p, tgt[i]) for i, p in enumerate(power)]


def test_individual_interference_example():
    got = linear_to_db(individual_interference(ap_facing_radar((1000, 0)), RADAR, 0.0, MODELS))
    expected = 30 + PEAK_WIFI_DB + 33.5 + coastal_db(1000)
    assert expected == pytest.approx(-23.3, abs=0.01)
    assert got == pytest.approx(expected, abs=1e-9)


def test_individual_interference_null():
    off = np.array([-np.cos(np.pi / 6), np.sin(np.pi / 6)]) * 100
    tx = Node(0, "AP", np.array([1000.0, 0]), 7, 30.0, np.array([1000.0, 0]) + off)
    assert individual_interference(tx, RADAR, 0.0, MODELS) < 1e-20


def test_individual_interference_radar_backlobe():
    tx = ap_facing_radar((1000, 0))
    front = individual_interference(tx, RadarState(15, 0.0), 0.0, MODELS)
    back = individual_interference(tx, RadarState(15, np.pi), 0.0, MODELS)
    assert linear_to_db(front / back) == pytest.approx(43.5)


def test_bandwidth_overlap_halves_wtr():
    tx = ap_facing_radar((1500, 200))
    full = individual_interference(tx, RADAR, 0.3, MODELS)
    half = individual_interference(tx, RADAR, 0.3, Models(bandwidth_overlap=True))
    assert half == pytest.approx(full / 2)


def test_aggregate_singleton():
    tx = random_winners(1, 0)
    assert aggregate_wtr(tx, RADAR, 0.7, MODELS) == individual_interference(tx[0], RADAR, 0.7, MODELS)


def test_aggregate_symmetric_pair():
    a = Node(0, "AP", np.array([1500.0, 300.0]), 0, 30.0, np.array([1450.0, 340.0]))
    b = Node(1, "AP", np.array([1500.0, -300.0]), 0, 30.0, np.array([1450.0, -340.0]))
    single = individual_interference(a, RADAR, 0.0, MODELS)
    assert aggregate_wtr([a, b], RADAR, 0.0, MODELS) == pytest.approx(2 * single, rel=1e-15)


@pytest.mark.parametrize("t", [0.0, 0.05, 1.3])
def test_aggregate_matches_brute_force(t):
    winners = random_winners(100, 1)
    loop = math.fsum(individual_interference(w, RADAR, t, MODELS) for w in winners)
    assert aggregate_wtr(winners, RADAR, t, MODELS) == pytest.approx(loop, rel=1e-12)


def test_aggregate_linear_over_disjoint_sets():
    winners = random_winners(60, 2)
    a, b = winners[:25], winners[25:]
    t = 0.02
    whole = aggregate_wtr(winners, RADAR, t, MODELS)
    assert whole == pytest.approx(aggregate_wtr(a, RADAR, t, MODELS) + aggregate_wtr(b, RADAR, t, MODELS),
                                  rel=1e-12)


def test_rotation_peak_at_single_ap():
    az = np.deg2rad(40.0)
    tx = ap_facing_radar((2000 * np.cos(az), 2000 * np.sin(az)))
    step = RADAR.rotation_period / 3600
    peak, t_peak = max_over_rotation([tx], RADAR, MODELS, step)
    assert abs(t_peak - az / (2 * np.pi) * RADAR.rotation_period) <= step
    assert peak == pytest.approx(individual_interference(tx, RADAR, t_peak, MODELS), rel=1e-12)


def test_rotation_max_bounds_probes():
    winners = random_winners(80, 3)
    peak, _ = max_over_rotation(winners, RADAR, MODELS, RADAR.rotation_period / 3600)
    for t in np.random.default_rng(4).uniform(0, RADAR.rotation_period, 50):
        assert peak >= aggregate_wtr(winners, RADAR, t, MODELS) * (1 - 1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_rotation_grid_refinement(seed):
    winners = random_winners(100, seed)
    step = RADAR.rotation_period / 3600
    coarse, _ = max_over_rotation(winners, RADAR, MODELS, step)
    fine, _ = max_over_rotation(winners, RADAR, MODELS, step / 2)
    assert abs(linear_to_db(fine / coarse)) < 0.1


def test_rotation_resolution_guard():
    with pytest.raises(ResolutionError):
        max_over_rotation(random_winners(3, 0), RADAR, MODELS, RADAR.rotation_period / 3000)


class DenseOnly:
    """Radar pattern without the attributes that enable the sparse path."""

    def gain(self, theta):
        return MODELS.radar.gain(theta)


def test_sparse_profile_matches_dense():
    rng = np.random.default_rng(5)
    az = rng.uniform(-np.pi, np.pi, 300)
    coeffs = rng.lognormal(size=300)
    sparse = aggregate_profile(az, coeffs, 3600, MODELS.radar, 0.4)
    dense = aggregate_profile(az, coeffs, 3600, DenseOnly(), 0.4)
    np.testing.assert_allclose(sparse, dense, rtol=1e-12)


def test_schedule_with_same_sets_is_noop():
    winners = random_winners(50, 6)
    schedule = build_sweep_schedule(RegionSpec.at_distance(2000, 1000, 112.84), RADAR, np.deg2rad(2))
    step = RADAR.rotation_period / 3600
    assert (max_over_rotation(winners, RADAR, MODELS, step, winners, schedule)
            == max_over_rotation(winners, RADAR, MODELS, step))


def test_mmai_and_standard_error():
    assert mmai([2.5] * 7) == 2.5
    with pytest.raises(ValueError):
        mmai([])
    x = np.random.default_rng(7).exponential(size=40_000)
    assert standard_error(x[:10_000]) / standard_error(x) == pytest.approx(2.0, rel=0.05)


def test_rtw_single_network():
    d = 2000.0
    victim = Node(1, "STA", np.array([d, 0.0]), 0, 10.0, np.array([d - 50, 0.0]))
    got = linear_to_db(rtw_interference([victim], RADAR, 0.0, MODELS))
    assert got == pytest.approx(90 + 33.5 + PEAK_WIFI_DB + coastal_db(d), abs=1e-9)


def test_rtw_average_of_identical_terms():
    v = Node(1, "STA", np.array([1800.0, 400.0]), 0, 10.0, np.array([1760.0, 380.0]))
    one = rtw_interference([v], RADAR, 0.5, MODELS)
    assert rtw_interference([v] * 100, RADAR, 0.5, MODELS) == pytest.approx(one, rel=1e-13)


def test_rtw_perpendicular_beam_in_array_null():
    aligned = Node(1, "STA", np.array([2000.0, 0.0]), 0, 10.0, np.array([1950.0, 0.0]))
    perpendicular = Node(1, "STA", np.array([2000.0, 0.0]), 0, 10.0, np.array([2000.0, 50.0]))
    ratio = rtw_interference([perpendicular], RADAR, 0.0, MODELS) / rtw_interference([aligned], RADAR, 0.0, MODELS)
    assert ratio < 1e-12


def link_pair(priority):
    tx = Node(0, "AP", np.array([2000.0, 0.0]), priority, 30.0, np.array([2050.0, 0.0]))
    rx = Node(1, "STA", np.array([2050.0, 0.0]), 0, 10.0, np.array([2000.0, 0.0]))
    return tx, rx


def test_sinr_noise_limited():
    tx, rx = link_pair(7)
    sinr, nppi = sinr_and_nppi(tx, rx, 0.0, "EDCA", MODELS)
    umi_loss = 36.7 * math.log10(50) + 22.7 + 26 * math.log10(3.5)
    expected_db = 30 + 2 * PEAK_WIFI_DB - umi_loss + 100.99
    assert linear_to_db(sinr) == pytest.approx(expected_db, abs=1e-9)
    assert nppi == sinr


def test_nppi_priority_weighting():
    tx, rx = link_pair(3)
    rtw = 1e-9
    sinr, nppi = sinr_and_nppi(tx, rx, rtw, "EDCA", MODELS)
    assert nppi == pytest.approx(sinr / 2)
    sinr_c, nppi_c = sinr_and_nppi(tx, rx, rtw, "CSMA", MODELS)
    assert nppi_c == sinr_c == sinr
    assert sinr < sinr_and_nppi(tx, rx, 0.0, "EDCA", MODELS)[0]


def test_nppi_never_above_sinr_for_edca():
    tx, rx = link_pair(0)
    for p in range(8):
        tx.priority = p
        sinr, nppi = sinr_and_nppi(tx, rx, 1e-10, "EDCA", MODELS)
        assert nppi <= sinr


def test_ring_quadrature_matches_closed_form():
    ring = Annulus((0.0, 0.0), 3000.0, 1000.0)
    quad = ring.integrate(lambda pts: MODELS.coastal.gain(np.hypot(pts[:, 0], pts[:, 1])))
    assert quad == pytest.approx(power_law_ring_integral(259, 3.97, 1000, 3000), rel=1e-8)


def test_offset_disc_quadrature_matches_radial_form():
    disc = Annulus((2000.0, 0.0), 1000.0)
    quad = disc.integrate(lambda pts: MODELS.coastal.gain(np.hypot(pts[:, 0], pts[:, 1])))
    assert quad == pytest.approx(offset_disc_radial_integral(MODELS.coastal.gain, 2000, 1000), rel=1e-7)


@pytest.mark.parametrize("name", ["count", "ring", "region"])
def test_campbell_cases_small(name):
    case = campbell_cases()[name]
    res = case.run(np.random.default_rng(8), trials=20_000)
    assert res.analytic_mean == pytest.approx(case.closed_form, rel=1e-7)
    assert abs(res.z_score) < 3


def test_campbell_analytic_linear_in_density():
    case = campbell_cases()["ring"]
    one = campbell_mean_oracle(case.density, case.region, case.h, np.random.default_rng(0), trials=10)
    two = campbell_mean_oracle(2 * case.density, case.region, case.h, np.random.default_rng(0), trials=10)
    assert two.analytic_mean == pytest.approx(2 * one.analytic_mean, rel=1e-12)
