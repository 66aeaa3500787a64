"""Fractional calculus, pathwise fractional SDE solvers and viability checks."""

from ._fracvia import (
    __version__,
    build_viable,
    builtin_names,
    covariance,
    holder_norm,
    lambda_alpha,
    run_cli,
    sample_fbm,
    solve,
    stieltjes_integral,
)

__all__ = [
    "__version__",
    "build_viable",
    "builtin_names",
    "covariance",
    "holder_norm",
    "lambda_alpha",
    "run_cli",
    "sample_fbm",
    "solve",
    "stieltjes_integral",
]
