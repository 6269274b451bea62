"""Exception hierarchy shared across the package."""


class RadialStatsError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(RadialStatsError):
    """A call violated an API precondition (mismatched manifolds, empty input, ...)."""


class DomainError(RadialStatsError):
    """Numerical input outside the mathematical domain (off-manifold point, NaN, ...)."""


class CutLocusError(DomainError):
    """Logarithm map requested across the cut locus, where it is undefined."""


class ParameterError(RadialStatsError):
    """Invalid distribution or profile parameter."""


class UnsupportedNormalizerError(RadialStatsError):
    """The normalizing constant has no radial reduction on this manifold."""


class BracketError(RadialStatsError):
    """A scalar solve was given bounds that do not bracket a root."""


class IndeterminateError(RadialStatsError):
    """A numerical check could not reach a verdict within its probing range."""
