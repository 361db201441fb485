"""Exception types shared across the package."""


class CVTeleportError(Exception):
    """Base class for all package errors."""


class DomainError(CVTeleportError, ValueError):
    """An argument is outside the mathematically valid domain."""


class StructuralError(CVTeleportError):
    """Shapes or layouts of inputs do not match."""


class NumericError(CVTeleportError):
    """A numerical routine failed to reach the requested tolerance.

    Carries the achieved residual where available so callers can report it.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RepresentationError(CVTeleportError):
    """The requested channel representation does not exist for these moments.

    Raised when the final-state variance drops below the vacuum floor, so a
    classical-noise channel with nonnegative noise cannot describe it.
    """


class InfeasibleError(CVTeleportError):
    """No feasible parameter point exists for the requested objective."""
