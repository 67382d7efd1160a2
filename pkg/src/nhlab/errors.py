"""Exception types shared across the package."""


class NHLabError(Exception):
    """Base class for all nhlab errors."""


class DomainError(NHLabError):
    """A coordinate or parameter left the chart / parameter domain."""


class DomainExit(DomainError):
    """A trajectory crossed the boundary of its chart during integration."""


class SingularTransform(NHLabError):
    """A group element maps the requested event to infinity (sigma(a^t, t) = 0)."""


class ChartMismatch(NHLabError):
    """Operands live on different charts."""


class GridMismatch(NHLabError):
    """Grid states are incompatible (shape, extent, time or chart differ)."""


class ResampleError(NHLabError):
    """Spectral resampling would require data from outside the source box."""


class BoundaryLeak(NHLabError):
    """Probability mass near the periodic box edge exceeded the guard tolerance."""


class CollisionError(NHLabError):
    """A test particle reached the position of the point source."""


class UnsupportedGenerator(NHLabError):
    """The requested generator/chart/kind combination is not defined."""


class ConfigError(NHLabError):
    """A run configuration file is malformed or inconsistent."""
