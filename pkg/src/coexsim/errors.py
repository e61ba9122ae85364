"""Exception types raised by the simulator."""


class CoexError(Exception):
    """Base class for all simulator errors."""


class ConfigError(CoexError, ValueError):
    """Invalid or unparsable scenario configuration."""


class DegenerateGeometryError(CoexError, ValueError):
    """An angle was requested along a zero-length vector."""


class ResolutionError(CoexError, ValueError):
    """Rotation time grid is too coarse."""
