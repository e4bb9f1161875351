"""Hele-Shaw tumor growth: boundary integral and obstacle solvers with a radial oracle."""

from ._impl import (
    ConfigError,
    DomainError,
    Error,
    GrowthLaw,
    ModelParams,
    bessel_i0,
    bessel_i1,
    bessel_k0,
    bessel_k1,
    format_double,
    integrate_radial,
    rate,
    run_config,
    solve_R0_given_R1,
    threshold_R_double_star,
    threshold_R_star,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "GrowthLaw",
    "ModelParams",
    "bessel_i0",
    "bessel_i1",
    "bessel_k0",
    "bessel_k1",
    "format_double",
    "integrate_radial",
    "rate",
    "run_config",
    "solve_R0_given_R1",
    "threshold_R_double_star",
    "threshold_R_star",
]
