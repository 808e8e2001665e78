"""Exception types raised by leodist."""


class LeodistError(Exception):
    """Base class for all leodist errors."""


class ConfigError(LeodistError, ValueError):
    """Invalid constellation configuration, observer, or preset name."""


class GeometryError(LeodistError, ValueError):
    """A geometric precondition does not hold (e.g. distance below shell onset)."""


class ConsistencyError(LeodistError, ArithmeticError):
    """Floating-point drift exceeded the clamping tolerance."""


class BeyondVisibilityError(LeodistError, ValueError):
    """Requested quantile lies in the missing mass of a defective distribution."""
