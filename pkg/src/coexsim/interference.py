"""Interference metrics at the radar and at the Wi-Fi receivers.

Powers are linear milliwatts throughout. The single-node functions take
:class:`~coexsim.mac.Node` objects; the ``*_batch`` / array helpers are what
the engine calls on whole drops.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .antenna import RadarPattern, WifiArrayPattern, db_to_linear, linear_to_db
from .errors import ResolutionError
from .geometry import TWO_PI, RadarState, boresight_at, off_axis_radar, off_axis_wifi
from .mac import Node, SweepSchedule
from .propagation import CoastalPathModel, NoiseBudget, UmiPathModel

MIN_SAMPLES_PER_ROTATION = 3600
INR_THRESHOLD_DB = -10.0


@dataclass(frozen=True)
class Models:
    wifi: WifiArrayPattern = WifiArrayPattern()
    radar: RadarPattern = RadarPattern()
    coastal: CoastalPathModel = CoastalPathModel()
    umi: UmiPathModel = UmiPathModel()
    noise: NoiseBudget = NoiseBudget()
    radar_power_dbm: float = 90.0
    bandwidth_overlap: bool = False

    @classmethod
    def from_config(cls, cfg) -> "Models":
        return cls(
            wifi=WifiArrayPattern(cfg.wifi_element_gain_dbi, cfg.wifi_elements, cfg.wifi_spacing,
                                  cfg.wifi_front_to_back_db),
            radar=RadarPattern(cfg.radar_peak_gain_dbi, cfg.radar_beamwidth_deg, cfg.radar_sidelobe_db),
            coastal=CoastalPathModel(cfg.coastal_coefficient, cfg.coastal_exponent),
            umi=UmiPathModel(cfg.carrier_ghz, cfg.umi_los),
            noise=NoiseBudget(noise_power_wifi=cfg.noise_wifi_dbm, noise_power_radar=cfg.noise_radar_dbm),
            radar_power_dbm=cfg.radar_power_dbm,
            bandwidth_overlap=cfg.bandwidth_overlap,
        )

    @property
    def wtr_scale(self) -> float:
        # only half of the 20 MHz Wi-Fi channel lands in the 10 MHz radar band
        return 0.5 if self.bandwidth_overlap else 1.0

    def noise_mw(self, system: str) -> float:
        return float(db_to_linear(self.noise.noise_power(system)))


@dataclass
class DropMetrics:
    mmai_sample: float
    argmax_t: float
    inr_db: float
    sinr: np.ndarray
    nppi: np.ndarray
    winner_ids: np.ndarray
    safe_winner_ids: np.ndarray
    winner_priority: np.ndarray
    sweep_winner_ids: np.ndarray
    sweep_fallback: np.ndarray
    sweep_violations: int = 0


# --- radar side ---------------------------------------------------------------

def wtr_coefficients(tx_positions, beam_targets, tx_power_dbm, models: Models) -> np.ndarray:
    """Time-independent part of each TX's interference at the radar.

    ``P_T * G_T(theta_w) * l(|tx|)`` per TX; multiply by the radar gain toward
    the TX to get the received power.
    """
    tx_positions = np.asarray(tx_positions, dtype=float)
    theta_w = off_axis_wifi(tx_positions, beam_targets)
    dist = np.hypot(tx_positions[..., 0], tx_positions[..., 1])
    return (db_to_linear(tx_power_dbm) * models.wifi.gain(theta_w) * models.coastal.gain(dist)
            * models.wtr_scale)


def individual_interference(tx: Node, radar: RadarState, t: float, models: Models) -> float:
    """Power (mW) the radar receives from one Wi-Fi transmitter at time ``t``."""
    coeff = wtr_coefficients(tx.position, tx.beam_target, tx.tx_power_dbm, models)
    theta_r = off_axis_radar(tx.position, radar.at(t))
    return float(coeff * models.radar.gain(theta_r))


def aggregate_wtr(winners: Sequence[Node], radar: RadarState, t: float, models: Models) -> float:
    """Sum of individual interference over one transmitter per network."""
    if not winners:
        return 0.0
    pos = np.array([w.position for w in winners], dtype=float)
    tgt = np.array([w.beam_target for w in winners], dtype=float)
    pwr = np.array([w.tx_power_dbm for w in winners], dtype=float)
    coeff = wtr_coefficients(pos, tgt, pwr, models)
    theta_r = off_axis_radar(pos, radar.at(t))
    # sorted summation makes the result independent of winner order
    return float(np.sum(np.sort(coeff * models.radar.gain(theta_r))))


def rotation_grid(rotation_period: float, time_step: float) -> tuple[int, float]:
    """Number of samples and the (possibly shrunk) step covering one rotation evenly."""
    n = int(np.ceil(rotation_period / time_step * (1 - 1e-12)))
    if n < MIN_SAMPLES_PER_ROTATION:
        raise ResolutionError(
            f"time_step {time_step} s gives {n} samples per rotation, need >= {MIN_SAMPLES_PER_ROTATION}")
    return n, rotation_period / n


def aggregate_profile(azimuths, coeffs, n_steps: int, pattern, start_angle: float = 0.0) -> np.ndarray:
    """Aggregate received power at ``n_steps`` equally spaced boresight angles.

    Boresight ``i`` is ``start_angle + 2 pi i / n_steps``. Patterns exposing
    ``floor_gain`` and ``mainlobe_halfwidth`` take a sparse path that only
    visits grid points inside each mainlobe; anything else is evaluated densely.
    """
    azimuths = np.asarray(azimuths, dtype=float).ravel()
    coeffs = np.asarray(coeffs, dtype=float).ravel()
    step = TWO_PI / n_steps
    floor = getattr(pattern, "floor_gain", None)
    halfwidth = getattr(pattern, "mainlobe_halfwidth", None)

    if floor is None or halfwidth is None or 2 * halfwidth >= np.pi:
        out = np.zeros(n_steps)
        boresight = start_angle + step * np.arange(n_steps)
        for lo in range(0, azimuths.size, 256):
            diff = boresight[:, None] - azimuths[None, lo:lo + 256]
            out += pattern.gain(np.abs(np.mod(diff + np.pi, TWO_PI) - np.pi)) @ coeffs[lo:lo + 256]
        return out

    out = np.full(n_steps, floor * np.sum(coeffs))
    if azimuths.size == 0:
        return out
    w = int(np.ceil(halfwidth / step)) + 1
    offsets = np.arange(-w, w + 1)
    centre = np.rint((azimuths - start_angle) / step).astype(np.int64)
    idx = centre[:, None] + offsets[None, :]
    angle = start_angle + step * idx
    theta = np.abs(np.mod(angle - azimuths[:, None] + np.pi, TWO_PI) - np.pi)
    excess = coeffs[:, None] * (pattern.gain(theta) - floor)
    out += np.bincount(np.mod(idx, n_steps).ravel(), weights=excess.ravel(), minlength=n_steps)
    return out


def rotation_max(azimuths, coeffs, radar: RadarState, models: Models, time_step: float,
                 sweep_azimuths=None, sweep_coeffs=None, schedule: SweepSchedule | None = None
                 ) -> tuple[float, float]:
    """Max over one rotation of the aggregate, switching TX sets during the sweep.

    Without ``schedule`` the first TX set transmits all the time. Returns
    ``(max_power_mw, argmax_t)`` with ``t`` measured from the radar's
    current boresight.
    """
    n, dt = rotation_grid(radar.rotation_period, time_step)
    profile = aggregate_profile(azimuths, coeffs, n, models.radar, radar.boresight_angle)
    if schedule is not None and sweep_coeffs is not None:
        in_sweep = schedule.in_sweep(dt * np.arange(n))
        sweep = aggregate_profile(sweep_azimuths, sweep_coeffs, n, models.radar, radar.boresight_angle)
        profile = np.where(in_sweep, sweep, profile)
    i = int(np.argmax(profile))
    return float(profile[i]), i * dt


def max_over_rotation(winners: Sequence[Node], radar: RadarState, models: Models, time_step: float,
                      sweep_winners: Sequence[Node] | None = None,
                      schedule: SweepSchedule | None = None) -> tuple[float, float]:
    """Peak aggregate interference during one rotation and the instant it occurs."""

    def _arrays(nodes):
        pos = np.array([w.position for w in nodes], dtype=float).reshape(-1, 2)
        tgt = np.array([w.beam_target for w in nodes], dtype=float).reshape(-1, 2)
        pwr = np.array([w.tx_power_dbm for w in nodes], dtype=float)
        return np.arctan2(pos[:, 1], pos[:, 0]), wtr_coefficients(pos, tgt, pwr, models)

    az, c = _arrays(winners)
    if sweep_winners is None:
        return rotation_max(az, c, radar, models, time_step)
    az_s, c_s = _arrays(sweep_winners)
    return rotation_max(az, c, radar, models, time_step, az_s, c_s, schedule)


def mmai(samples) -> float:
    """Mean of per-drop rotation maxima (mW)."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("need at least one drop")
    return float(np.mean(samples))


def standard_error(samples) -> float:
    samples = np.asarray(samples, dtype=float)
    if samples.size < 2:
        return float("nan")
    return float(np.std(samples, ddof=1) / np.sqrt(samples.size))


def inr_db(interference_mw, models: Models):
    return linear_to_db(np.asarray(interference_mw) / models.noise_mw("radar"))


# --- Wi-Fi side ---------------------------------------------------------------

def rtw_batch(rx_positions, rx_theta_w, boresight: float, models: Models) -> float:
    """Radar power averaged over the victim receivers at one boresight angle."""
    rx_positions = np.asarray(rx_positions, dtype=float).reshape(-1, 2)
    if rx_positions.shape[0] == 0:
        return 0.0
    az = np.arctan2(rx_positions[:, 1], rx_positions[:, 0])
    theta_r = np.abs(np.mod(az - boresight + np.pi, TWO_PI) - np.pi)
    dist = np.hypot(rx_positions[:, 0], rx_positions[:, 1])
    terms = (db_to_linear(models.radar_power_dbm) * models.radar.gain(theta_r)
             * models.wifi.gain(np.asarray(rx_theta_w)).ravel() * models.coastal.gain(dist))
    return float(np.mean(terms))


def rtw_interference(victims: Sequence[Node], radar: RadarState, t: float, models: Models) -> float:
    """Average radar power (mW) at the victim receivers, each beamed at its TX."""
    if not victims:
        return 0.0
    pos = np.array([v.position for v in victims], dtype=float)
    tgt = np.array([v.beam_target for v in victims], dtype=float)
    return rtw_batch(pos, off_axis_wifi(pos, tgt), boresight_at(radar, t), models)


def link_sinr(tx_positions, tx_power_dbm, tx_theta, rx_positions, rx_theta, rtw: float,
              models: Models) -> np.ndarray:
    tx_positions = np.asarray(tx_positions, dtype=float)
    rx_positions = np.asarray(rx_positions, dtype=float)
    dist = np.hypot(*(rx_positions - tx_positions).T)
    signal = (db_to_linear(tx_power_dbm) * models.wifi.gain(tx_theta) * models.wifi.gain(rx_theta)
              * models.umi.gain(np.maximum(dist, models.umi.min_distance)))
    return signal / (rtw + models.noise_mw("wifi"))


def nppi_from_sinr(sinr, priority, scheme: str):
    """EDCA weighs SINR by (p+1)/8; CSMA leaves it unchanged."""
    sinr = np.asarray(sinr, dtype=float)
    if scheme == "EDCA":
        return sinr * (np.asarray(priority) + 1) / 8.0
    return sinr


def sinr_and_nppi(tx: Node, rx: Node, rtw: float, scheme: str, models: Models) -> tuple[float, float]:
    """Link SINR from ``tx`` to ``rx`` under radar interference ``rtw`` and its NPPI."""
    tx_theta = off_axis_wifi(tx.position, tx.beam_target, rx.position)
    rx_theta = off_axis_wifi(rx.position, rx.beam_target, tx.position)
    sinr = float(link_sinr(tx.position, tx.tx_power_dbm, tx_theta, rx.position, rx_theta, rtw, models))
    return sinr, float(nppi_from_sinr(sinr, tx.priority, scheme))


# --- Campbell check -----------------------------------------------------------

@dataclass(frozen=True)
class Annulus:
    """Ring ``inner <= |u - center| <= outer``; ``inner = 0`` is a disc."""

    center: tuple[float, float]
    outer: float
    inner: float = 0.0

    @property
    def area(self) -> float:
        return np.pi * (self.outer**2 - self.inner**2)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        r = np.sqrt(self.inner**2 + rng.random(n) * (self.outer**2 - self.inner**2))
        phi = TWO_PI * rng.random(n)
        return np.asarray(self.center) + np.column_stack([r * np.cos(phi), r * np.sin(phi)])

    def integrate(self, h: Callable) -> float:
        """Quadrature of ``h`` over the ring in polar coordinates about the centre."""
        cx, cy = self.center

        def f(r, phi):
            pt = np.array([[cx + r * np.cos(phi), cy + r * np.sin(phi)]])
            return float(np.asarray(h(pt)).ravel()[0]) * r

        val, _ = integrate.dblquad(f, 0.0, TWO_PI, self.inner, self.outer, epsrel=1e-10, epsabs=0)
        return val


@dataclass
class CampbellResult:
    empirical_mean: float
    analytic_mean: float
    standard_error: float
    trials: int

    @property
    def z_score(self) -> float:
        return (self.empirical_mean - self.analytic_mean) / self.standard_error


def campbell_mean_oracle(density: float, region: Annulus, h: Callable, rng: np.random.Generator,
                         trials: int = 100_000, analytic_integral: float | None = None,
                         chunk: int = 5_000) -> CampbellResult:
    """Monte Carlo mean of sum(h) over a Poisson process against density * integral(h).

    ``h`` maps an ``(n, 2)`` array of points to ``n`` values.
    """
    integral = region.integrate(h) if analytic_integral is None else analytic_integral
    sums = np.empty(trials)
    mean_count = density * region.area
    for lo in range(0, trials, chunk):
        k = min(chunk, trials - lo)
        counts = rng.poisson(mean_count, size=k)
        pts = region.sample(int(counts.sum()), rng)
        owner = np.repeat(np.arange(k), counts)
        sums[lo:lo + k] = np.bincount(owner, weights=np.asarray(h(pts), dtype=float), minlength=k)
    return CampbellResult(float(np.mean(sums)), density * integral, standard_error(sums), trials)


def power_law_ring_integral(coefficient: float, exponent: float, inner: float, outer: float) -> float:
    """Closed form of the integral of ``coefficient * |u|**-exponent`` over an origin-centred ring."""
    k = 2.0 - exponent
    return 2 * np.pi * coefficient * (outer**k - inner**k) / k


def offset_disc_radial_integral(h_radial: Callable, d: float, radius: float) -> float:
    """Integral of a radial function over a disc of ``radius`` centred at distance ``d``.

    Integrates ``h(r) * r * arc(r)`` where ``arc(r)`` is the angle subtended by
    the disc on the circle of radius ``r`` about the origin.
    """
    def f(r):
        c = np.clip((r * r + d * d - radius * radius) / (2 * r * d), -1.0, 1.0)
        return h_radial(r) * r * 2 * np.arccos(c)

    val, _ = integrate.quad(f, max(d - radius, 0.0), d + radius, epsrel=1e-11, limit=200)
    return val


@dataclass(frozen=True)
class CampbellCase:
    density: float
    region: Annulus
    h: Callable
    closed_form: float

    def run(self, rng: np.random.Generator, trials: int = 100_000) -> CampbellResult:
        return campbell_mean_oracle(self.density, self.region, self.h, rng, trials)


def campbell_cases(coastal: CoastalPathModel = CoastalPathModel(), d: float = 2000.0,
                   radius: float = 1000.0, expected_count: float = 100.0) -> dict[str, CampbellCase]:
    """The three reference sums: node count, path gain on a ring, path gain on the Wi-Fi region.

    ``closed_form`` is the expected sum from an evaluation path independent of
    the quadrature used inside :func:`campbell_mean_oracle`.
    """
    def path_gain(pts):
        return coastal.gain(np.hypot(pts[:, 0], pts[:, 1]))

    disc = Annulus((d, 0.0), radius)
    ring = Annulus((0.0, 0.0), 3 * radius, radius)
    lam_disc = expected_count / disc.area
    lam_ring = expected_count / ring.area
    return {
        "count": CampbellCase(lam_disc, disc, lambda pts: np.ones(len(pts)), expected_count),
        "ring": CampbellCase(lam_ring, ring, path_gain,
                             lam_ring * power_law_ring_integral(coastal.coefficient, coastal.exponent,
                                                                ring.inner, ring.outer)),
        "region": CampbellCase(lam_disc, disc, path_gain,
                               lam_disc * offset_disc_radial_integral(coastal.gain, d, radius)),
    }
