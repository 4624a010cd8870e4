"""Exception hierarchy shared by every module of the package."""


class DickmanError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(DickmanError, ValueError):
    """An argument is outside the accepted parameter range."""


class DomainError(DickmanError, ValueError):
    """A function was evaluated outside its mathematical domain."""


class UnsupportedWeightError(DomainError):
    """The requested quantity needs Dickman polylogarithms of weight >= 10."""


class SeriesDomainError(DickmanError, ValueError):
    """A truncated power-series operation violated its precondition."""


class NonConvergenceError(DickmanError, ArithmeticError):
    """Quadrature refinement hit its level cap without converging.

    ``best`` carries the last estimate and ``error_estimate`` the gap
    between the last two refinement levels.
    """

    def __init__(self, message, best=None, error_estimate=None):
        super().__init__(message)
        self.best = best
        self.error_estimate = error_estimate


class EvaluationError(DickmanError, ArithmeticError):
    """An integrand returned a non-finite value."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class ConsistencyError(DickmanError, ArithmeticError):
    """Two independent constructions of the same quantity disagree."""
