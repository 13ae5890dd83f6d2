"""Exception types raised across the package."""


class SpecLagError(Exception):
    """Base class for all package errors."""


class DimensionError(SpecLagError, ValueError):
    """Operands have incompatible shapes."""


class HypothesisViolation(SpecLagError, ValueError):
    """A sample point violates the immersion or phase-speed hypotheses."""


class QuadratureError(SpecLagError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class SamplingError(SpecLagError, ValueError):
    """The quadric cannot be sampled with the requested method."""


class ConstraintError(SpecLagError, ValueError):
    """A point does not lie on the quadric to tolerance."""


class ConfigError(SpecLagError, ValueError):
    """Invalid run configuration. ``path`` names the offending field."""

    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
