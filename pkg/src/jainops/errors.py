"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(ValueError):
    """A requested order exceeds the implemented closed-form tables."""


class TruncationError(RuntimeError):
    """A series truncation cap was reached before the tail criterion was met."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""
