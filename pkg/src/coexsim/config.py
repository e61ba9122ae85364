"""Scenario configuration and the flat ``key = value`` config-file format."""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .errors import ConfigError

SCHEMES = ("EDCA", "CSMA")
NPPI_INSTANTS = ("sweep", "rotation")


@dataclass(frozen=True)
class SimConfig:
    """Every knob of one scenario. Lengths in meters, angles in degrees.

    Defaults reproduce the evaluated setup: a 3.14 km^2 region
    (``r_reg`` = 1000 m) of 100 networks, 0.04 km^2 each (``r_net`` = 112.84 m),
    10 STAs per AP, 10,000 drops.
    """

    d: float = 2000.0
    r_reg: float = 1000.0
    r_net: float = float(np.sqrt(0.04e6 / np.pi))
    lambda_ap: int = 100
    lambda_sta: int = 10
    scheme: str = "EDCA"
    mitigation: bool = False
    theta_deg: float = 30.0
    rpm: float = 15.0
    tau: float = 1e-3
    packet_duration: float = 0.5e-3
    n_drops: int = 10_000
    time_step: float | None = None
    seed: int = 20170101
    workers: int = 1

    # radio parameters
    ap_power_dbm: float = 30.0
    sta_power_dbm: float = 10.0
    radar_power_dbm: float = 90.0
    wifi_element_gain_dbi: float = 2.15
    wifi_elements: int = 4
    wifi_spacing: float = 0.5
    wifi_front_to_back_db: float | None = 20.0
    radar_peak_gain_dbi: float = 33.5
    radar_beamwidth_deg: float = 2.0
    radar_sidelobe_db: float = 43.5
    beamwidth_margin_deg: float | None = None
    coastal_coefficient: float = 259.0
    coastal_exponent: float = 3.97
    carrier_ghz: float = 3.5
    umi_los: bool = False
    noise_wifi_dbm: float = -100.99
    noise_radar_dbm: float = -104.0

    # modelling switches
    poisson_counts: bool = False
    bandwidth_overlap: bool = False
    position_error_std: float = 0.0
    nppi_instant: str = "sweep"

    def __post_init__(self):
        errors = self.violations()
        if errors:
            raise ConfigError("invalid configuration: " + "; ".join(errors))

    def violations(self) -> list[str]:
        out = []
        for name in ("d", "r_reg", "r_net", "rpm", "tau"):
            if not getattr(self, name) > 0:
                out.append(f"{name} must be positive")
        for name in ("lambda_ap", "lambda_sta", "n_drops", "workers"):
            if int(getattr(self, name)) < 1:
                out.append(f"{name} must be >= 1")
        if not self.r_reg > self.r_net:
            out.append("r_reg must exceed r_net")
        if self.d < self.r_reg:
            out.append(f"d={self.d} m puts the radar inside the Wi-Fi region (r_reg={self.r_reg} m)")
        if not 0.0 <= self.theta_deg <= 180.0:
            out.append(f"theta_deg must lie in [0, 180], got {self.theta_deg}")
        if self.scheme not in SCHEMES:
            out.append(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.nppi_instant not in NPPI_INSTANTS:
            out.append(f"nppi_instant must be one of {NPPI_INSTANTS}")
        if self.time_step is not None and self.time_step <= 0:
            out.append("time_step must be positive")
        if self.position_error_std < 0 or self.packet_duration < 0:
            out.append("position_error_std and packet_duration must be >= 0")
        return out

    @property
    def theta(self) -> float:
        """Off-axis threshold in radians."""
        return float(np.deg2rad(self.theta_deg))

    @property
    def rotation_period(self) -> float:
        return 60.0 / self.rpm

    @property
    def resolved_time_step(self) -> float:
        return self.time_step if self.time_step is not None else self.rotation_period / 3600

    @property
    def margin(self) -> float:
        deg = self.radar_beamwidth_deg if self.beamwidth_margin_deg is None else self.beamwidth_margin_deg
        return float(np.deg2rad(deg))

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        """Short stable hash of the numerics-relevant fields (``workers`` excluded)."""
        d = self.to_dict()
        d.pop("workers")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]


_FIELD_TYPES = {f.name: f.type for f in fields(SimConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    text = raw.strip()
    if "None" in kind and text.lower() in ("", "none", "auto"):
        return None
    if kind.startswith("bool"):
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if kind.startswith("int"):
        try:
            return int(text)
        except ValueError:
            value = float(text)  # accepts "1e4"
            if not value.is_integer():
                raise ValueError(f"not an integer: {raw!r}") from None
            return int(value)
    if kind.startswith("float"):
        return float(text)
    if key == "scheme":
        return text.upper()
    return text


def parse_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines (``#`` starts a comment) into typed values."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{source}:{lineno}: unknown field {key!r}")
        try:
            values[key] = _coerce(key, raw)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: field {key!r}: {exc}") from None
    return values


def parse_config(path: str | Path | None = None, overrides: dict | None = None) -> SimConfig:
    """Build a validated config from an optional file plus overrides.

    Overrides may be typed values or strings (as they arrive from the command
    line) and always win over the file.
    """
    values = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        values.update(parse_text(text, str(path)))
    for key, val in (overrides or {}).items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown field {key!r}")
        if isinstance(val, str):
            try:
                val = _coerce(key, val)
            except ValueError as exc:
                raise ConfigError(f"override {key!r}: {exc}") from None
        values[key] = val
    return SimConfig(**values)
