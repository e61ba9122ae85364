"""Monte Carlo simulator for outdoor Wi-Fi / rotating radar coexistence at 3.5 GHz."""
from .antenna import RadarPattern, WifiArrayPattern
from .config import SimConfig, parse_config
from .engine import RunResult, empirical_cdf, run, sweep_parameter
from .errors import CoexError, ConfigError, DegenerateGeometryError, ResolutionError
from .geometry import RadarState, RegionSpec, sample_drop
from .interference import Models

__all__ = [
    "CoexError", "ConfigError", "DegenerateGeometryError", "Models", "RadarPattern", "RadarState",
    "RegionSpec", "ResolutionError", "RunResult", "SimConfig", "WifiArrayPattern", "empirical_cdf",
    "parse_config", "run", "sample_drop", "sweep_parameter",
]
__version__ = "0.1.0"
