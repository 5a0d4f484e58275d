"""Exception hierarchy shared by all modules."""


class FluidMimoError(Exception):
    """Base class for package errors."""


class InvalidArgumentError(FluidMimoError, ValueError):
    """An argument is outside the domain of the operation."""


class InvariantViolationError(FluidMimoError, ValueError):
    """A value object does not satisfy its structural invariants."""


class UnsupportedConfigurationError(FluidMimoError, ValueError):
    """The requested configuration is valid but not covered by the formula."""


class SingularityError(FluidMimoError, ArithmeticError):
    """A correlation matrix is too close to singular for the operation.

    Attributes
    ----------
    min_eigenvalue : float
        Smallest eigenvalue of the offending matrix.
    """

    def __init__(self, message, min_eigenvalue):
        super().__init__(message)
        self.min_eigenvalue = float(min_eigenvalue)


class DegenerateSampleWarning(UserWarning):
    """Sample statistics were computed from degenerate input."""
