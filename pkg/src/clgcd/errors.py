"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the documented domain of an operation."""


class PoleError(ZeroDivisionError):
    """A linear fractional transformation was evaluated at its pole."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed (cost identities, hard worst-case bounds).

    This is never a user error: it means two independent computations of the
    same quantity disagreed, so the library itself is wrong somewhere.
    """


class ConvergenceError(RuntimeError):
    """An iterative solver ran out of iterations.

    The partial result is attached as the ``result`` attribute so callers can
    inspect the last iterate.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
