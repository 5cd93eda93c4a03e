"""Exception hierarchy shared across the library."""


class Ncx2DiffError(Exception):
    """Base class for all library errors."""


class DomainError(Ncx2DiffError, ValueError):
    """Argument outside the mathematical domain of the function."""


class NonConvergenceError(Ncx2DiffError):
    """A series or iteration hit its term budget before converging."""


class SingularPointError(Ncx2DiffError):
    """The density is infinite (or undefined) at the requested point.

    Carries the offending abscissa so callers can flag it in grid output.
    """

    def __init__(self, x, message="density is singular at this point"):
        super().__init__(f"{message}: x={x}")
        self.x = x


class InversionAccuracyError(Ncx2DiffError):
    """Characteristic-function inversion could not meet the requested accuracy."""


class UnsupportedParameterError(Ncx2DiffError):
    """Operation is not defined for these parameter values."""


class CancellationWarning(UserWarning):
    """Alternating sum lost most of its significant digits."""
