"""Exception types shared across the package."""


class Willmore4Error(Exception):
    """Base class for all errors raised by this package."""


class DomainError(Willmore4Error, ValueError):
    """An argument lies outside the domain of an operation."""


class SingularityError(Willmore4Error, ZeroDivisionError):
    """A division or map hit a singular point."""


class InsufficientOrderError(Willmore4Error):
    """A jet does not carry enough derivatives for the request."""


class DegenerateImmersionError(Willmore4Error):
    """The induced metric is (numerically) degenerate."""


class UnsupportedOperationError(Willmore4Error, NotImplementedError):
    """The requested grade combination is deliberately not implemented."""


class ConfigError(Willmore4Error):
    """A run configuration or spec string is invalid."""
