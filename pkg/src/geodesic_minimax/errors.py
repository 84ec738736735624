"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class GeodesicMinimaxError(ValueError):
    """Base class for every error raised by this package."""


class InvalidPointError(GeodesicMinimaxError):
    pass


class ParameterOutOfRangeError(GeodesicMinimaxError):
    pass


class DimensionMismatchError(InvalidPointError):
    pass


class PointOnBoundaryError(InvalidPointError):
    """A Poincare point left the open ball (with its safety margin)."""


class InvalidEdgeError(InvalidPointError):
    pass


class OffsetOutOfRangeError(InvalidPointError):
    pass


class TriangleInequalityError(GeodesicMinimaxError):
    pass


class EmptyTailError(GeodesicMinimaxError):
    pass


class EmptyProbeSetError(GeodesicMinimaxError):
    pass


class InvalidLambdaError(GeodesicMinimaxError):
    pass


class NoConvergenceError(GeodesicMinimaxError):
    """The inner resolvent solver hit its sweep budget.

    The partially converged result is attached so callers can still inspect it.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class GridTooLargeError(GeodesicMinimaxError):
    pass


class ConfigError(GeodesicMinimaxError):
    pass
