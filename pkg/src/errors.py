"""Exception hierarchy for the knot invariant toolkit."""

from typing import Optional


class KnotYYError(Exception):
    """Base class for every error raised by this package."""


class InvalidLieTypeError(KnotYYError, ValueError):
    """Unknown family, rank out of bounds, or a weight index invalid for the type."""


class LaurentParseError(KnotYYError, ValueError):
    """Malformed serialized Laurent polynomial."""


class LaurentDivisionError(KnotYYError, ArithmeticError):
    """Inexact division or inversion of a non-unit."""


class PairingNotInvertibleError(KnotYYError):
    """No invertible creation/annihilation pairing exists for this type."""


class MinimalPolynomialError(KnotYYError):
    """No linear dependence among I, R, R^2, R^3."""


class BraidParseError(KnotYYError, ValueError):
    """Malformed braid word or generator index out of range."""


class InvalidConfigurationError(KnotYYError, ValueError):
    """Critical-point parameters out of range, such as a negative c."""


class SingularConfigurationError(KnotYYError, ArithmeticError):
    """Coincident coordinates in the critical equations, or a singular Jacobian."""


class _ResidualError(KnotYYError):
    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class NewtonDivergenceError(_ResidualError):
    """Newton iteration did not reach the requested residual."""


class ClosedFormResidualError(_ResidualError):
    """A closed-form critical point fails the residual check."""


class ContinuationError(_ResidualError):
    """Continuation in c lost the solution branch."""
