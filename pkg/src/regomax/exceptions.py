"""Exception hierarchy shared by all modules."""


class RegomaxError(Exception):
    """Base class for errors raised by this package."""


class GraphFormatError(RegomaxError, ValueError):
    """A malformed line in an edge list, label or selection file."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class CapacityError(RegomaxError, OverflowError):
    """A node id does not fit the index type used for compressed storage."""


class DimensionError(RegomaxError, ValueError):
    """Vector or matrix shape does not match the operator."""


class SelectionError(RegomaxError, ValueError):
    """Invalid node selection (duplicates, out of range, empty complement...)."""


class ConvergenceError(RegomaxError, ArithmeticError):
    """An iteration stopped at ``max_iter`` without meeting its tolerance.

    The last iterate is kept on the exception so callers can inspect it,
    but it is never returned as if it were a converged result.
    """

    def __init__(self, message, residual, iterations, last=None):
        super().__init__(f"{message} (residual {residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations
        self.last = last


class SeriesDivergenceError(ConvergenceError):
    """The deflated Neumann series stopped decreasing."""

    def __init__(self, message, residual, iterations, lambda_estimate):
        super().__init__(f"{message}; decay ratio estimate {lambda_estimate:.6f}", residual, iterations)
        self.lambda_estimate = lambda_estimate
