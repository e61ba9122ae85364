"""Azimuth gain patterns for the Wi-Fi linear array and the rotating radar.

All gains are returned as linear power ratios; helpers convert to dB at the
edges.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


def db_to_linear(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def linear_to_db(x):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(x, dtype=float))


def array_factor_power(theta, num_elements: int, spacing: float):
    """|AF(theta)|^2 of a uniform linear array, theta measured from broadside.

    Closed form sin^2(N psi/2) / sin^2(psi/2) with psi = 2 pi delta sin(theta);
    the removable singularity at psi = 0 (mod 2 pi) evaluates to N^2.
    """
    theta = np.asarray(theta, dtype=float)
    half_psi = np.pi * spacing * np.sin(theta)
    den = np.sin(half_psi)
    num = np.sin(num_elements * half_psi)
    small = np.abs(den) < 1e-12
    safe_den = np.where(small, 1.0, den)
    return np.where(small, float(num_elements) ** 2, (num / safe_den) ** 2)


@dataclass(frozen=True)
class WifiArrayPattern:
    """4-element half-wave-spaced array of 2.15 dBi elements (8.17 dBi peak).

    The front hemisphere (|theta| <= pi/2) is the linear-array power pattern
    ``g_element * |AF|^2 / N``. Behind the panel the gain is flat at
    ``peak - front_to_back_db``; a bare linear array would instead repeat its
    main beam at theta = pi. ``front_to_back_db=None`` gives the bare array.
    """

    element_gain_dbi: float = 2.15
    num_elements: int = 4
    spacing: float = 0.5
    front_to_back_db: float | None = 20.0

    def __post_init__(self):
        if self.num_elements < 1 or self.spacing <= 0:
            raise ConfigError("array needs >= 1 element and positive spacing")
        if self.front_to_back_db is not None and self.front_to_back_db < 0:
            raise ConfigError("front_to_back_db must be >= 0")

    @property
    def peak_gain_dbi(self) -> float:
        return self.element_gain_dbi + 10.0 * np.log10(self.num_elements)

    @property
    def back_gain(self) -> float | None:
        if self.front_to_back_db is None:
            return None
        return float(db_to_linear(self.peak_gain_dbi - self.front_to_back_db))

    def front_gain(self, theta):
        """Bare array pattern, valid at any angle."""
        g = db_to_linear(self.element_gain_dbi) * array_factor_power(theta, self.num_elements, self.spacing)
        return g / self.num_elements

    def gain(self, theta):
        theta = np.asarray(theta, dtype=float)
        g = self.front_gain(theta)
        if self.front_to_back_db is not None:
            back = np.abs(np.mod(theta + np.pi, 2 * np.pi) - np.pi) > np.pi / 2
            g = np.where(back, self.back_gain, g)
        return float(g) if g.ndim == 0 else g


@dataclass(frozen=True)
class RadarPattern:
    """High-gain radar antenna: parabolic mainlobe (in dB) onto a flat floor.

    G(theta) = G_max - 12 (theta / theta_3dB)^2 dBi, never below
    G_max - sidelobe_db.
    """

    peak_gain_dbi: float = 33.5
    beamwidth_3db_deg: float = 2.0
    sidelobe_db: float = 43.5

    def __post_init__(self):
        if not 22.0 < self.peak_gain_dbi < 48.0:
            raise ConfigError(f"high-gain model needs 22 < G_max < 48 dBi, got {self.peak_gain_dbi}")
        if self.beamwidth_3db_deg <= 0 or self.sidelobe_db <= 0:
            raise ConfigError("beamwidth and sidelobe depth must be positive")

    @property
    def floor_gain(self) -> float:
        return float(db_to_linear(self.peak_gain_dbi - self.sidelobe_db))

    @property
    def mainlobe_halfwidth(self) -> float:
        """Off-axis angle (rad) beyond which the gain sits on the floor."""
        return np.deg2rad(self.beamwidth_3db_deg) * np.sqrt(self.sidelobe_db / 12.0)

    def gain_db(self, theta):
        theta = np.abs(np.mod(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi)
        drop = 12.0 * (theta / np.deg2rad(self.beamwidth_3db_deg)) ** 2
        out = self.peak_gain_dbi - np.minimum(drop, self.sidelobe_db)
        return float(out) if out.ndim == 0 else out

    def gain(self, theta):
        out = db_to_linear(self.gain_db(theta))
        return float(out) if out.ndim == 0 else out
