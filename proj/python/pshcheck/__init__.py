"""Monte Carlo mean-value checks for plurisubharmonic functions."""

from ._pshcheck import (
    ConfigError,
    DomainError,
    EvaluationError,
    Expression,
    ExpressionError,
    PreconditionError,
    catalog,
    check_mean_value_d,
    d_upper_T,
    ellipsoid_volume,
    laplace_constant_ball,
    mean_over_ellipsoid,
    min_levi_eigenvalue,
    run_cli,
    set_worker_count,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "EvaluationError",
    "Expression",
    "ExpressionError",
    "PreconditionError",
    "catalog",
    "check_mean_value_d",
    "d_upper_T",
    "ellipsoid_volume",
    "laplace_constant_ball",
    "mean_over_ellipsoid",
    "min_levi_eigenvalue",
    "run_cli",
    "set_worker_count",
]
