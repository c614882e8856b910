"""Positive doubly stochastic inverse eigenvalue solver."""

from ._pdstiep import (
    Error,
    InputError,
    NumericalError,
    gamma_sum,
    invariant_subspaces,
    random_problem,
    real_schur,
    sinkhorn,
    solve,
    to_dot,
)

__all__ = [
    "Error",
    "InputError",
    "NumericalError",
    "gamma_sum",
    "invariant_subspaces",
    "random_problem",
    "real_schur",
    "sinkhorn",
    "solve",
    "to_dot",
]
