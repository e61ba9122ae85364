"""Planar scene geometry: node placement, radar rotation and off-axis angles.

Positions are arrays whose last axis holds ``(x, y)`` in meters, so every
function here accepts a single point or a stack of points.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateGeometryError

TWO_PI = 2.0 * np.pi
ORIGIN = np.zeros(2)


@dataclass(frozen=True)
class RegionSpec:
    """Disc holding all Wi-Fi networks, centred at ``(d, 0)``."""

    center: np.ndarray
    radius_region: float
    radius_network: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if not np.all(np.isfinite(self.center)):
            raise ConfigError("region center must be finite")
        if not self.radius_region > self.radius_network > 0:
            raise ConfigError(
                f"need radius_region > radius_network > 0, got "
                f"{self.radius_region} and {self.radius_network}"
            )

    @classmethod
    def at_distance(cls, d: float, radius_region: float, radius_network: float) -> "RegionSpec":
        return cls(np.array([float(d), 0.0]), radius_region, radius_network)

    @property
    def distance(self) -> float:
        return float(np.hypot(*self.center))

    @property
    def area(self) -> float:
        return np.pi * self.radius_region**2


@dataclass(frozen=True)
class RadarState:
    rpm: float
    boresight_angle: float = 0.0
    origin: np.ndarray = field(default_factory=lambda: ORIGIN.copy())

    def __post_init__(self):
        if not self.rpm > 0:
            raise ConfigError(f"rpm must be positive, got {self.rpm}")
        object.__setattr__(self, "boresight_angle", float(self.boresight_angle) % TWO_PI)

    @property
    def rotation_period(self) -> float:
        return 60.0 / self.rpm

    def at(self, t: float) -> "RadarState":
        return RadarState(self.rpm, boresight_at(self, t), self.origin)


@dataclass
class DropLayout:
    """One realised deployment.

    ``sta_positions`` is padded to ``(n_ap, max_sta, 2)``; ``sta_mask`` marks
    the real entries (all True unless Poisson counts were requested).
    """

    ap_positions: np.ndarray
    sta_positions: np.ndarray
    sta_mask: np.ndarray
    region: RegionSpec

    @property
    def n_ap(self) -> int:
        return self.ap_positions.shape[0]

    @property
    def sta_counts(self) -> np.ndarray:
        return self.sta_mask.sum(axis=1)


def uniform_in_disc(center, radius: float, size, rng: np.random.Generator) -> np.ndarray:
    """Points uniform on a disc; ``size`` is the leading shape of the result."""
    size = (size,) if np.isscalar(size) else tuple(size)
    r = radius * np.sqrt(rng.random(size))
    phi = TWO_PI * rng.random(size)
    return np.asarray(center)[..., :] + np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1)


def sample_drop(config, rng: np.random.Generator) -> DropLayout:
    """Place APs in the region and STAs around each AP.

    Exactly ``lambda_ap`` APs and ``lambda_sta`` STAs per AP are drawn unless
    ``config.poisson_counts`` is set, in which case the counts are Poisson
    with those means.
    """
    if config.lambda_ap < 1 or config.lambda_sta < 1:
        raise ConfigError("lambda_ap and lambda_sta must be >= 1")
    if config.d < config.r_reg:
        raise ConfigError(f"region (radius {config.r_reg} m) would contain the radar at d={config.d} m")
    region = RegionSpec.at_distance(config.d, config.r_reg, config.r_net)

    if config.poisson_counts:
        n_ap = int(rng.poisson(config.lambda_ap))
        counts = rng.poisson(config.lambda_sta, size=n_ap)
    else:
        n_ap = int(config.lambda_ap)
        counts = np.full(n_ap, int(config.lambda_sta))
    max_sta = int(counts.max()) if n_ap else 0

    aps = uniform_in_disc(region.center, region.radius_region, n_ap, rng)
    stas = uniform_in_disc(np.zeros(2), region.radius_network, (n_ap, max_sta), rng)
    # a STA sitting on its AP has no beam direction; redraw it
    bad = np.all(stas == 0.0, axis=-1)
    while bad.any():
        stas[bad] = uniform_in_disc(np.zeros(2), region.radius_network, int(bad.sum()), rng)
        bad = np.all(stas == 0.0, axis=-1)
    stas = stas + aps[:, None, :]
    mask = np.arange(max_sta)[None, :] < counts[:, None]
    stas[~mask] = np.nan
    return DropLayout(aps, stas, mask, region)


def boresight_at(radar: RadarState, t) -> np.ndarray | float:
    """Radar beam azimuth ``t`` seconds after ``radar``'s snapshot, wrapped to [0, 2*pi)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    angle = np.mod(radar.boresight_angle + TWO_PI * radar.rpm / 60.0 * t, TWO_PI)
    return float(angle) if angle.ndim == 0 else angle


def _angle_between(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    nu = np.hypot(u[..., 0], u[..., 1])
    nv = np.hypot(v[..., 0], v[..., 1])
    if np.any(nu == 0) or np.any(nv == 0):
        raise DegenerateGeometryError("off-axis angle along a zero-length vector")
    cross = u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
    dot = u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1]
    # atan2 keeps precision near 0 and pi where arccos(dot) does not
    return np.arctan2(np.abs(cross), dot)


def off_axis_wifi(tx, beam_target, radar_origin=ORIGIN):
    """Angle between the TX beam (tx -> target) and the tx -> radar axis, in [0, pi]."""
    tx = np.asarray(tx, dtype=float)
    out = _angle_between(np.asarray(beam_target, dtype=float) - tx, np.asarray(radar_origin, dtype=float) - tx)
    return float(out) if np.ndim(out) == 0 else out


def off_axis_radar(node, radar: RadarState):
    """Angle between the radar boresight and the radar -> node axis, in [0, pi]."""
    rel = np.asarray(node, dtype=float) - radar.origin
    boresight = np.array([np.cos(radar.boresight_angle), np.sin(radar.boresight_angle)])
    out = _angle_between(rel, np.broadcast_to(boresight, rel.shape))
    return float(out) if np.ndim(out) == 0 else out


def wrap_angle(a):
    """Wrap to (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(a), TWO_PI)
