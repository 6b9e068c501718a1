"""
Exception hierarchy for geodiscord.

Physics errors (a matrix that is not a state, a parameter out of range)
are kept apart from input errors (a file that cannot be read or parsed) so
the command line can map them to different exit codes.
"""

from typing import Optional


class GeoDiscordError(Exception):
    """Base class for every error raised by geodiscord."""


class PhysicsError(GeoDiscordError):
    """An input that is well formed but violates a physical invariant."""

    def __init__(self, message: str, invariant: Optional[str] = None, residual: Optional[float] = None):
        super().__init__(message)
        self.invariant = invariant
        self.residual = residual


class DimensionMismatch(PhysicsError):
    pass


class NotHermitian(PhysicsError):
    pass


class NotUnitTrace(PhysicsError):
    pass


class NotPSD(PhysicsError):
    pass


class BadParameter(PhysicsError):
    pass


class IndexOutOfRange(PhysicsError):
    pass


class NotNormalized(PhysicsError):
    pass


class NotUnitary(PhysicsError):
    pass


class InvalidMeasurement(PhysicsError):
    pass


class StateFileError(GeoDiscordError):
    """A state, amplitude or output file that is missing, malformed or unwritable."""
