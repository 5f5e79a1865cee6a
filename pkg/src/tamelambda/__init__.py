"""Iwasawa lambda-invariants of tamely ramified pro-p extensions of Q_infty.

Closed formulas for lambda_S over Q and imaginary quadratic fields, with
independent brute-force and analytic oracles to check them.
"""

__version__ = "0.1.0"

from .analytic import lambda_empty_quad, minus_h_valuation, stickelberger_series
from .eisenstein import order_X2, order_X3
from .errors import (
    DomainError,
    HypothesisError,
    InvariantError,
    ResourceError,
    TameLambdaError,
    UnsupportedError,
)
from .kernels import BACKEND
from .lambda_engine import ferrero_kida, lambda_Q, lambda_quad, quad_profile
from .padic import splitting_profile
from .ray_class import growth_lambda, ray_class_group, unit_power_check

__all__ = [
    "BACKEND",
    "DomainError",
    "HypothesisError",
    "InvariantError",
    "ResourceError",
    "TameLambdaError",
    "UnsupportedError",
    "ferrero_kida",
    "growth_lambda",
    "lambda_Q",
    "lambda_empty_quad",
    "lambda_quad",
    "minus_h_valuation",
    "order_X2",
    "order_X3",
    "quad_profile",
    "ray_class_group",
    "splitting_profile",
    "stickelberger_series",
    "unit_power_check",
]
