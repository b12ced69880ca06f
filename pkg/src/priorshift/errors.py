"""Exception hierarchy shared by all modules."""


class PriorShiftError(Exception):
    """Base class for errors raised by this package."""


class DomainError(PriorShiftError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class DegeneracyError(PriorShiftError, ValueError):
    """The data or model carry no information about the prevalence.

    Raised e.g. when every sample point satisfies ``f1(z) == f0(z)`` so the
    likelihood is constant in ``q``.
    """


class SamplingError(PriorShiftError, NotImplementedError):
    """The density family does not know how to draw random variates."""


class ConvergenceError(PriorShiftError, RuntimeError):
    """An iterative solver hit its iteration cap.

    Attributes:
        last_iterate: the final iterate before giving up.
        iterations: number of iterations performed.
    """

    def __init__(self, message, last_iterate, iterations):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.iterations = iterations


class QuadratureError(PriorShiftError, RuntimeError):
    """Adaptive quadrature ran out of subdivisions before meeting tolerance.

    Attributes:
        estimate: best available value of the integral.
        error: the associated error estimate.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
