"""Path-gain models and the thermal-noise budget."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

THERMAL_NOISE_DBM_HZ = -174.0


@dataclass(frozen=True)
class CoastalPathModel:
    """Power-law radar <-> Wi-Fi path gain, ``coefficient * r**-exponent`` (r in meters)."""

    coefficient: float = 259.0
    exponent: float = 3.97

    def __post_init__(self):
        if self.coefficient <= 0 or self.exponent <= 2:
            raise ConfigError("coastal model needs coefficient > 0 and exponent > 2")

    def gain(self, distance):
        distance = np.asarray(distance, dtype=float)
        if np.any(distance <= 0):
            raise ValueError("coastal path gain undefined at zero distance")
        out = self.coefficient * distance ** (-self.exponent)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class UmiPathModel:
    """Urban-micro small-cell path loss.

    NLOS: 36.7 log10(r) + 22.7 + 26 log10(fc)
    LOS:  22.0 log10(r) + 28.0 + 20 log10(fc)
    with r in meters and fc in GHz.
    """

    carrier_ghz: float = 3.5
    los: bool = False
    min_distance: float = 1.0

    def loss_db(self, distance):
        distance = np.asarray(distance, dtype=float)
        if np.any(distance < self.min_distance):
            raise ValueError(f"UMi model needs distance >= {self.min_distance} m")
        if self.los:
            out = 22.0 * np.log10(distance) + 28.0 + 20.0 * np.log10(self.carrier_ghz)
        else:
            out = 36.7 * np.log10(distance) + 22.7 + 26.0 * np.log10(self.carrier_ghz)
        return float(out) if out.ndim == 0 else out

    def gain(self, distance):
        out = 10.0 ** (-np.asarray(self.loss_db(distance)) / 10.0)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class NoiseBudget:
    bandwidth_wifi: float = 20e6
    bandwidth_radar: float = 10e6
    noise_power_wifi: float = -100.99
    noise_power_radar: float = -104.0

    def noise_power(self, system: str) -> float:
        """Noise floor in dBm for ``"wifi"`` or ``"radar"``."""
        if system == "wifi":
            return self.noise_power_wifi
        if system == "radar":
            return self.noise_power_radar
        raise ValueError(f"unknown system {system!r}")


def thermal_noise_dbm(bandwidth_hz: float) -> float:
    return THERMAL_NOISE_DBM_HZ + 10.0 * np.log10(bandwidth_hz)
