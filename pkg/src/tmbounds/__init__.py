"""Sharp Trudinger-Moser constants via the half-line reduction."""
from .numerics import (ConvergenceError, DomainError, EvaluationError, Tolerance, ValidationError,
                       alpha_n, gamma_fn, integrate, lower_incomplete_gamma, phi_truncated_exp,
                       sphere_area, unit_ball_volume)

__version__ = "0.1.0"

__all__ = ["ConvergenceError", "DomainError", "EvaluationError", "Tolerance", "ValidationError",
           "alpha_n", "gamma_fn", "integrate", "lower_incomplete_gamma", "phi_truncated_exp",
           "sphere_area", "unit_ball_volume", "__version__"]
