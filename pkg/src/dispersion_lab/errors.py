"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class UndefinedFieldError(ValueError):
    """A ratio field (mean velocity, quantum potential, ...) was requested
    where the density vanishes."""


class AccuracyError(ArithmeticError):
    """Quadrature could not reach the requested tolerance.

    The best available estimate is kept on ``estimate``.
    """

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate


class CoverageError(RuntimeError):
    """Too many sample points were skipped for a residual to be meaningful."""


class NumericError(ArithmeticError):
    """Eigenvalue bracketing or iteration failed."""
