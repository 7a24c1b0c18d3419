"""Finite element eigensolver with multi-level correction."""

from ._eigcorr import (
    ConfigError,
    Error,
    InvalidArgument,
    IterationLimit,
    NestingViolation,
    ParseError,
    UnsupportedLadder,
    analytic_eigenvalue,
    laplace_pencil,
    multi_level_solve,
    rayleigh_expansion_residual,
    run_direct,
    run_multilevel,
    run_two_grid,
    smallest_eigenvalues,
    two_grid_solve,
    unit_square_mesh,
)

__all__ = [
    "ConfigError",
    "Error",
    "InvalidArgument",
    "IterationLimit",
    "NestingViolation",
    "ParseError",
    "UnsupportedLadder",
    "analytic_eigenvalue",
    "laplace_pencil",
    "multi_level_solve",
    "rayleigh_expansion_residual",
    "run_direct",
    "run_multilevel",
    "run_two_grid",
    "smallest_eigenvalues",
    "two_grid_solve",
    "unit_square_mesh",
]
