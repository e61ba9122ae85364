"""Medium access: priorities, contention winners and the sweep schedule.

Contention is resolved once per network per snapshot. Without mitigation the
winner is the highest-priority node (EDCA) or a uniformly drawn node (CSMA).
During the radar sweep only nodes whose beam points far enough away from the
radar (off-axis angle above the threshold) are eligible; under EDCA the
eligible set is intersected with the same number of top-priority nodes and the
intersection is served in decreasing off-axis order.

Each operation has a list-of-:class:`Node` form used for single networks and
a ``*_batch`` form working on ``(n_networks, n_nodes)`` arrays for the engine.
Column 0 of a batch is the AP.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .geometry import RadarState, RegionSpec

AP_PRIORITIES = (4, 7)
STA_PRIORITIES = (0, 7)


@dataclass
class Node:
    id: int
    role: str  # "AP" or "STA"
    position: np.ndarray
    priority: int = 0
    tx_power_dbm: float = 0.0
    beam_target: np.ndarray | None = None


@dataclass
class EligibilitySets:
    by_priority: list[int]
    by_angle: list[int]
    threshold: float
    m: int
    selected_order: list[int] = field(default_factory=list)
    fallback: bool = False


def assign_priorities(layout, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Uniform priorities: APs in {4..7}, STAs in {0..7}.

    Returns ``(ap_priorities, sta_priorities)`` shaped ``(n_ap,)`` and
    ``(n_ap, max_sta)``; padded STA slots get -1.
    """
    ap = rng.integers(AP_PRIORITIES[0], AP_PRIORITIES[1] + 1, size=layout.n_ap)
    sta = rng.integers(STA_PRIORITIES[0], STA_PRIORITIES[1] + 1, size=layout.sta_mask.shape)
    sta = np.where(layout.sta_mask, sta, -1)
    return ap, sta


def _random_order(keys: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Argsort of ``keys`` descending along the last axis, ties shuffled."""
    jitter = rng.random(keys.shape)
    # lexsort sorts by the last key first
    return np.lexsort((jitter, -keys), axis=-1)


def _ranks(order: np.ndarray) -> np.ndarray:
    return np.argsort(order, axis=-1)


def select_unmitigated_batch(priorities, mask, scheme: str, rng: np.random.Generator) -> np.ndarray:
    """Winner column per network when every node may contend."""
    priorities = np.asarray(priorities, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if scheme == "CSMA":
        keys = np.where(mask, rng.random(mask.shape), -np.inf)
        return np.argmax(keys, axis=1)
    if scheme != "EDCA":
        raise ConfigError(f"unknown access scheme {scheme!r}")
    keys = np.where(mask, priorities, -np.inf)
    order = _random_order(keys, rng)
    return order[:, 0]


def select_mitigated_batch(priorities, theta_w, mask, scheme: str, threshold: float,
                           rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Sweep-period winner column per network and a per-network fallback flag.

    The fallback (argmax off-axis angle) fires when nothing qualifies.
    """
    priorities = np.asarray(priorities, dtype=float)
    theta_w = np.asarray(theta_w, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    angle_keys = np.where(mask, theta_w, -np.inf)
    by_angle = _random_order(angle_keys, rng)
    angle_rank = _ranks(by_angle)
    m = np.sum(mask & (theta_w > threshold), axis=1)

    if scheme == "CSMA":
        eligible = angle_rank < m[:, None]
    elif scheme == "EDCA":
        by_priority = _random_order(np.where(mask, priorities, -np.inf), rng)
        priority_rank = _ranks(by_priority)
        eligible = (angle_rank < m[:, None]) & (priority_rank < m[:, None])
    else:
        raise ConfigError(f"unknown access scheme {scheme!r}")

    # first eligible node in off-axis order; rank 0 (argmax) when none
    rank_key = np.where(eligible, angle_rank, np.iinfo(angle_rank.dtype).max)
    fallback = ~eligible.any(axis=1)
    winner = np.where(fallback, by_angle[:, 0], np.argmin(rank_key, axis=1))
    return winner, fallback


def select_tx_unmitigated(network: Sequence[Node], scheme: str, rng: np.random.Generator) -> Node:
    if not network:
        raise ValueError("empty network")
    prio = np.array([[n.priority for n in network]])
    idx = select_unmitigated_batch(prio, np.ones_like(prio, dtype=bool), scheme, rng)[0]
    return network[idx]


def eligibility_sets(network: Sequence[Node], scheme: str, theta_w, threshold: float,
                     rng: np.random.Generator) -> EligibilitySets:
    """Build the priority- and angle-sorted id lists and the service order."""
    ids = [n.id for n in network]
    theta_w = list(map(float, theta_w))
    tie = {i: rng.random() for i in ids}
    pos = {n.id: k for k, n in enumerate(network)}
    by_priority = sorted(ids, key=lambda i: (-network[pos[i]].priority, tie[i]))
    by_angle = sorted(ids, key=lambda i: (-theta_w[pos[i]], tie[i]))
    m = sum(t > threshold for t in theta_w)
    top_angle = by_angle[:m]
    if scheme == "CSMA":
        order = list(top_angle)
    elif scheme == "EDCA":
        top_priority = set(by_priority[:m])
        order = [i for i in top_angle if i in top_priority]
    else:
        raise ConfigError(f"unknown access scheme {scheme!r}")
    sets = EligibilitySets(by_priority, by_angle, threshold, m, order)
    if not order:
        sets.fallback = True
        sets.selected_order = [by_angle[0]]
    return sets


def select_tx_mitigated(network: Sequence[Node], scheme: str, theta_w, threshold: float,
                        rng: np.random.Generator) -> Node:
    if not network:
        raise ValueError("empty network")
    sets = eligibility_sets(network, scheme, theta_w, threshold, rng)
    winner = sets.selected_order[0]
    return next(n for n in network if n.id == winner)


@dataclass(frozen=True)
class SweepSchedule:
    """Split of one rotation into the sweep window (beam over the region) and the safe rest.

    Times are seconds after the radar snapshot the schedule was built from. The sweep interval is centred on the instant the beam crosses
    the region-centre azimuth and may wrap past the period end, so
    ``sweep_start`` can exceed ``sweep_end``.
    """

    rotation_period: float
    sweep_start: float
    sweep_end: float
    sweep_duration: float
    mitigation_lead: float

    @property
    def safe_duration(self) -> float:
        return self.rotation_period - self.sweep_duration

    def in_sweep(self, t):
        t = np.mod(np.asarray(t, dtype=float), self.rotation_period)
        if self.sweep_duration >= self.rotation_period:
            out = np.ones_like(t, dtype=bool)
        elif self.sweep_start <= self.sweep_end:
            out = (t >= self.sweep_start) & (t < self.sweep_end)
        else:
            out = (t >= self.sweep_start) | (t < self.sweep_end)
        return bool(out) if out.ndim == 0 else out

    def time_to_sweep(self, t: float) -> float:
        if self.in_sweep(t):
            return 0.0
        return float(np.mod(self.sweep_start - t, self.rotation_period))


def build_sweep_schedule(region: RegionSpec, radar: RadarState, beamwidth_margin: float,
                         tau: float = 1e-3) -> SweepSchedule:
    d = region.distance
    if d < region.radius_region:
        raise ConfigError(f"region of radius {region.radius_region} m contains the radar (d={d} m)")
    width = min(2.0 * np.arcsin(region.radius_region / d) + beamwidth_margin, 2 * np.pi)
    period = radar.rotation_period
    duration = width / (2 * np.pi) * period
    centre_azimuth = np.arctan2(region.center[1], region.center[0])
    t_centre = np.mod(centre_azimuth - radar.boresight_angle, 2 * np.pi) / (2 * np.pi) * period
    start = float(np.mod(t_centre - duration / 2, period))
    end = float(np.mod(t_centre + duration / 2, period))
    return SweepSchedule(period, start, end, float(duration), float(tau))


def is_eligible_near_transition(packet_duration: float, time_to_sweep: float, tau: float) -> bool:
    """Whether a packet may still contend when a sweep is about to start.

    A packet shorter than the mitigation lead ``tau`` is allowed; a longer
    one must defer by a whole sweep. ``time_to_sweep`` only matters through
    the caller's choice to ask (the rule looks at packet length alone).
    """
    if min(packet_duration, time_to_sweep, tau) < 0:
        raise ValueError("durations must be non-negative")
    return packet_duration < tau
