"""Exception types shared across the package."""


class DomainError(ValueError):
    """Raised when an argument is outside an operation's domain."""


class ConvergenceError(RuntimeError):
    """Raised when a series majorant is invalid and summation cannot certify its tail."""


class AccuracyError(RuntimeError):
    """Raised when refinement stalls before the requested tolerance.

    Carries the best estimate produced so far in ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
