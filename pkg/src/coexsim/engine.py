"""Seeded Monte Carlo driver.

Each drop draws from its own generators derived from ``(seed, drop index,
purpose)``, so a drop's numbers do not depend on which worker ran it or on
how many drops ran before it. The purposes are separate streams, which also
means two configs that differ only in access scheme or mitigation share the
same node placements, priorities and beam targets (common random numbers).
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import SimConfig
from .errors import ConfigError
from .geometry import RadarState, RegionSpec, off_axis_wifi, sample_drop
from .interference import (DropMetrics, Models, inr_db, link_sinr, nppi_from_sinr, rotation_max,
                           rtw_batch, standard_error, wtr_coefficients)
from .mac import (SweepSchedule, assign_priorities, build_sweep_schedule, select_mitigated_batch,
                  select_unmitigated_batch)

log = logging.getLogger(__name__)

STREAMS = ("layout", "priority", "target", "contention", "sweep", "instant", "position_error")


def drop_streams(seed: int, index: int) -> dict[str, np.random.Generator]:
    root = np.random.SeedSequence(seed, spawn_key=(index,))
    return {name: np.random.default_rng(child) for name, child in zip(STREAMS, root.spawn(len(STREAMS)))}


@dataclass
class RunResult:
    config: SimConfig
    mmai_samples: np.ndarray
    nppi: np.ndarray
    sinr: np.ndarray
    fallback_count: int
    sweep_decisions: int
    violations: int
    ap_share_safe: float
    ap_share_sweep: float
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def drop_count(self) -> int:
        return self.mmai_samples.size

    @property
    def mmai_mw(self) -> float:
        return float(np.mean(self.mmai_samples))

    @property
    def mmai_dbm(self) -> float:
        return float(10 * np.log10(self.mmai_mw))

    @property
    def mmai_se_mw(self) -> float:
        return standard_error(self.mmai_samples)

    @property
    def inr_mean_db(self) -> float:
        """INR of the MMAI (mean taken in linear scale, then expressed in dB)."""
        return float(inr_db(self.mmai_mw, Models.from_config(self.config)))

    @property
    def nppi_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 10 * np.log10(self.nppi)

    @property
    def fallback_rate(self) -> float:
        return self.fallback_count / self.sweep_decisions if self.sweep_decisions else 0.0


def _network_arrays(cfg: SimConfig, layout, streams):
    """Stack AP (column 0) and STAs per network with beam targets and powers."""
    n_ap, max_sta = layout.sta_mask.shape
    pos = np.concatenate([layout.ap_positions[:, None, :], layout.sta_positions], axis=1)
    mask = np.concatenate([np.ones((n_ap, 1), bool), layout.sta_mask], axis=1)
    active = layout.sta_counts > 0
    # an AP serves one of its STAs, drawn uniformly; STAs beam at their AP
    served = (streams["target"].random(n_ap) * np.maximum(layout.sta_counts, 1)).astype(int) + 1
    targets = np.repeat(layout.ap_positions[:, None, :], max_sta + 1, axis=1)
    if max_sta:
        targets[:, 0] = pos[np.arange(n_ap), np.minimum(served, max_sta)]
    return pos, targets, mask & active[:, None], active, served


def simulate_drop(cfg: SimConfig, models: Models, index: int, schedule: SweepSchedule) -> DropMetrics:
    streams = drop_streams(cfg.seed, index)
    layout = sample_drop(cfg, streams["layout"])
    ap_prio, sta_prio = assign_priorities(layout, streams["priority"])
    prio = np.concatenate([ap_prio[:, None], sta_prio], axis=1)
    pos, targets, mask, active, served_col = _network_arrays(cfg, layout, streams)
    rows = np.flatnonzero(active)
    pos, targets, mask, prio, served_col = pos[rows], targets[rows], mask[rows], prio[rows], served_col[rows]
    n_net, n_col = mask.shape
    safe_pos = np.where(mask[..., None], pos, 1.0)
    safe_tgt = np.where(mask[..., None], targets, 2.0)
    theta_w = np.where(mask, off_axis_wifi(safe_pos, safe_tgt), -np.inf)

    if cfg.position_error_std > 0:
        noise = streams["position_error"].normal(0.0, cfg.position_error_std, size=pos.shape)
        noisy = safe_pos + noise
        noisy_tgt = np.repeat(noisy[:, :1], n_col, axis=1)
        noisy_tgt[:, 0] = noisy[np.arange(n_net), np.minimum(served_col, n_col - 1)]
        reported_theta = np.where(mask, off_axis_wifi(noisy, noisy_tgt), -np.inf)
    else:
        reported_theta = theta_w

    power = np.where(np.arange(n_col) == 0, cfg.ap_power_dbm, cfg.sta_power_dbm)
    coeff = np.where(mask, wtr_coefficients(safe_pos, safe_tgt, power, models), 0.0)
    azimuth = np.arctan2(pos[..., 1], pos[..., 0])
    net = np.arange(n_net)

    safe_win = select_unmitigated_batch(prio, mask, cfg.scheme, streams["contention"])
    if cfg.mitigation:
        sweep_win, fallback = select_mitigated_batch(prio, reported_theta, mask, cfg.scheme, cfg.theta,
                                                     streams["sweep"])
    else:
        sweep_win, fallback = safe_win, np.zeros(n_net, bool)

    radar = RadarState(cfg.rpm)
    mmai_sample, t_max = rotation_max(
        azimuth[net, safe_win], coeff[net, safe_win], radar, models, cfg.resolved_time_step,
        azimuth[net, sweep_win], coeff[net, sweep_win], schedule if cfg.mitigation else None)

    violations = 0
    if cfg.mitigation:
        violations = int(np.sum(~fallback & (theta_w[net, sweep_win] <= cfg.theta)))

    # one SINR / NPPI sample per network at a single instant
    u = streams["instant"].random()
    if cfg.nppi_instant == "sweep":
        t = (schedule.sweep_start + u * schedule.sweep_duration) % schedule.rotation_period
    else:
        t = u * schedule.rotation_period
    win = sweep_win if (cfg.mitigation and schedule.in_sweep(t)) else safe_win
    rx_col = np.where(win == 0, served_col, 0)
    tx_pos, rx_pos = pos[net, win], pos[net, rx_col]
    # the RX beams at its TX: its off-axis angle toward the radar sets the RtW gain
    rx_radar_theta = off_axis_wifi(rx_pos, tx_pos)
    rtw = rtw_batch(rx_pos, rx_radar_theta, 2 * np.pi * cfg.rpm / 60.0 * t, models)
    tx_link_theta = off_axis_wifi(tx_pos, targets[net, win], rx_pos)
    rx_link_theta = off_axis_wifi(rx_pos, tx_pos, tx_pos)
    sinr = link_sinr(tx_pos, power[win], tx_link_theta, rx_pos, rx_link_theta, rtw, models)
    nppi = nppi_from_sinr(sinr, prio[net, win], cfg.scheme)

    return DropMetrics(
        mmai_sample=mmai_sample,
        argmax_t=t_max,
        inr_db=float(inr_db(mmai_sample, models)),
        sinr=np.asarray(sinr, dtype=float),
        nppi=np.asarray(nppi, dtype=float),
        winner_ids=win,
        safe_winner_ids=safe_win,
        winner_priority=prio[net, win],
        sweep_winner_ids=sweep_win,
        sweep_fallback=fallback,
        sweep_violations=violations,
    )


def _run_chunk(cfg: SimConfig, lo: int, hi: int):
    models = Models.from_config(cfg)
    schedule = build_sweep_schedule(RegionSpec.at_distance(cfg.d, cfg.r_reg, cfg.r_net),
                                    RadarState(cfg.rpm), cfg.margin, cfg.tau)
    mmai, nppi, sinr = [], [], []
    fallback = decisions = violations = 0
    ap_safe = ap_sweep = n_net = 0
    for i in range(lo, hi):
        m = simulate_drop(cfg, models, i, schedule)
        mmai.append(m.mmai_sample)
        nppi.append(m.nppi)
        sinr.append(m.sinr)
        fallback += int(m.sweep_fallback.sum())
        decisions += m.sweep_fallback.size if cfg.mitigation else 0
        violations += m.sweep_violations
        ap_sweep += int(np.sum(m.sweep_winner_ids == 0))
        ap_safe += int(np.sum(m.safe_winner_ids == 0))
        n_net += m.sweep_winner_ids.size
    return (np.array(mmai), np.concatenate(nppi) if nppi else np.zeros(0),
            np.concatenate(sinr) if sinr else np.zeros(0), fallback, decisions, violations, ap_sweep, ap_safe, n_net)


def run(config: SimConfig, workers: int | None = None) -> RunResult:
    """Run ``config.n_drops`` drops and aggregate them.

    Results are bit-identical for any ``workers`` because every drop is
    seeded independently and the per-drop outputs are concatenated in drop
    order before any reduction.
    """
    if not isinstance(config, SimConfig):
        raise ConfigError("run() needs a SimConfig")
    workers = config.workers if workers is None else workers
    start = time.perf_counter()
    n = config.n_drops
    if workers <= 1 or n < 2:
        parts = [_run_chunk(config, 0, n)]
    else:
        bounds = np.linspace(0, n, min(workers * 4, n) + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, config, int(a), int(b))
                       for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
            parts = [f.result() for f in futures]
    mmai = np.concatenate([p[0] for p in parts])
    nppi = np.sort(np.concatenate([p[1] for p in parts]))
    sinr = np.sort(np.concatenate([p[2] for p in parts]))
    fallback, decisions, violations, ap_sweep, ap_safe, n_net = (sum(p[k] for p in parts) for k in range(3, 9))
    result = RunResult(
        config=config,
        mmai_samples=mmai,
        nppi=nppi,
        sinr=sinr,
        fallback_count=fallback,
        sweep_decisions=decisions,
        violations=violations,
        ap_share_safe=ap_safe / n_net if n_net else float("nan"),
        ap_share_sweep=ap_sweep / n_net if n_net else float("nan"),
        wall_time=time.perf_counter() - start,
    )
    log.info("run d=%.0f scheme=%s mitigation=%s theta=%.0f: INR %.2f dB over %d drops (%.1fs)",
             config.d, config.scheme, config.mitigation, config.theta_deg, result.inr_mean_db,
             result.drop_count, result.wall_time)
    return result


def sweep_parameter(base: SimConfig, axis: str, values) -> list[RunResult]:
    """One run per value of ``d`` (meters) or ``theta`` (degrees).

    Run ``i`` uses seed ``base.seed + i``.
    """
    values = list(values)
    if not values:
        raise ValueError("no sweep values given")
    key = {"d": "d", "theta": "theta_deg", "theta_deg": "theta_deg"}.get(axis)
    if key is None:
        raise ConfigError(f"cannot sweep over {axis!r}; use 'd' or 'theta'")
    return [run(base.replace(**{key: v, "seed": base.seed + i})) for i, v in enumerate(values)]


def empirical_cdf(samples, x):
    """Fraction of ``samples`` (sorted ascending) that are <= ``x``."""
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("empirical CDF of an empty sample set")
    out = np.searchsorted(samples, x, side="right") / samples.size
    return float(out) if np.ndim(out) == 0 else out


def batch_means_se(samples, n_batches: int = 20) -> float:
    """Standard error of the mean estimated from contiguous batch means."""
    samples = np.asarray(samples, dtype=float)
    usable = samples.size // n_batches * n_batches
    means = samples[:usable].reshape(n_batches, -1).mean(axis=1)
    return float(np.std(means, ddof=1) / np.sqrt(n_batches))
