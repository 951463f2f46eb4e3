"""Rank-one matrix sensing via cosh-potential descent."""

from ._core import (
    GenerationFailed,
    InvalidInput,
    MeasurementSet,
    Overflow,
    SolverConfig,
    default_gd_schedule,
    default_sgd_schedule,
    default_spectral_schedule,
    gen_ground_truth,
    gen_orthogonal,
    gen_rho_bounded,
    grad_norm_orthogonal,
    phi,
    phi_grad,
    residuals,
    run_gd,
    run_sgd,
    run_sgd_general,
    run_spectral_gd,
    spectral_certificate,
    verify_solution,
)

__all__ = [
    "GenerationFailed",
    "InvalidInput",
    "MeasurementSet",
    "Overflow",
    "SolverConfig",
    "default_gd_schedule",
    "default_sgd_schedule",
    "default_spectral_schedule",
    "gen_ground_truth",
    "gen_orthogonal",
    "gen_rho_bounded",
    "grad_norm_orthogonal",
    "phi",
    "phi_grad",
    "residuals",
    "run_gd",
    "run_sgd",
    "run_sgd_general",
    "run_spectral_gd",
    "spectral_certificate",
    "verify_solution",
]
