"""Exception hierarchy shared by all zeta4 modules."""


class Zeta4Error(Exception):
    """Base class for every error raised by this package."""


class UsageError(Zeta4Error, ValueError):
    """Invalid argument or out-of-range request."""


class AccuracyError(Zeta4Error):
    """A requested accuracy cannot be met with the given parameters."""


class DivergenceError(Zeta4Error, ValueError):
    """Evaluation point where the function diverges."""


class RecognitionError(Zeta4Error):
    """No rational of the allowed height lies within tolerance."""


class QuadratureError(Zeta4Error):
    """Base class for quadrature failures."""


class IntegrandError(QuadratureError):
    """The integrand returned NaN or infinity at an interior node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ConvergenceError(QuadratureError):
    """Level doubling hit ``max_level`` without meeting the target.

    Carries the best available value and its error estimate.
    """

    def __init__(self, message, value=None, err_estimate=None, levels_used=0, evaluations=0):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate
        self.levels_used = levels_used
        self.evaluations = evaluations
