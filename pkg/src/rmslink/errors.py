"""Exception types shared across the package.

Everything derives from ValueError so callers that only care about
"bad input" can catch that.
"""


class ConfigError(ValueError):
    """Invalid system or sweep configuration (bad value, unknown key, ...)."""


class GeometryError(ValueError):
    """Singular or inconsistent geometry (e.g. feed coincident with an element)."""


class ModulationError(ValueError):
    """Unreachable harmonic amplitude or amplitude-budget violation."""


class EstimationError(ValueError):
    """Singular pilot pattern or non-separable cascade."""


class DegenerateChannelError(ValueError):
    """Channel matrix unusable for the requested operation (e.g. rank deficient)."""
