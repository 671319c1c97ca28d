"""L^p moduli of continuity for stationary-increment Gaussian processes and
local times of symmetric Lévy processes: spectral quadrature, simulation,
moment oracles and a Monte Carlo verification harness."""

__version__ = "0.1.0"

from levy_moduli.errors import (
    AlignmentError,
    ConfigError,
    DomainError,
    QuadratureError,
    SimulationError,
)

__all__ = ["AlignmentError", "ConfigError", "DomainError", "QuadratureError",
           "SimulationError", "__version__"]
