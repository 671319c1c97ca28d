"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class AlignmentError(ValueError):
    """A lag is not an integer multiple of the grid spacing."""


class ConfigError(ValueError):
    """An experiment configuration is invalid."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, estimate=float("nan")):
        super().__init__(f"{message} (achieved error estimate {estimate:.3g})")
        self.estimate = estimate


class SimulationError(RuntimeError):
    """Covariance factorization failed while simulating a path."""
