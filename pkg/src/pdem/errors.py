"""Exception types shared across the package."""


class PdemError(Exception):
    """Base class for all package errors."""


class DomainError(PdemError):
    """Input lies outside the valid domain (bad interval, singular point on grid, ...)."""


class MonotonicityError(PdemError):
    """A coordinate map that must be strictly increasing is not."""


class DimensionError(PdemError):
    """Operators or fields live on incompatible grids."""


class ConvergenceError(PdemError):
    """An iterative solver exhausted its iteration budget."""


class BracketError(PdemError):
    """A root bracket does not contain a sign change."""


class BasinError(PdemError):
    """An iteration left the search basin (diverging refinement)."""


class ConfigError(PdemError):
    """A run configuration file is malformed or violates model constraints."""
