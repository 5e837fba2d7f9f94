"""Exception types shared across the package."""


class PsiSpecError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PsiSpecError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class ParameterError(PsiSpecError, ValueError):
    """Invalid (alpha, beta, mu, gamma, ...) parameter combination."""


class InputError(PsiSpecError, ValueError):
    """User-supplied data (e.g. right-hand side samples) is not usable."""


class NumericError(PsiSpecError, ArithmeticError):
    """A numerical procedure failed (non-convergence, singular system, ...)."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class OracleError(NumericError):
    """The reference (oracle) machinery failed to converge."""
