from ._functions import (
    eigenspace_dim,
    hermite_1d,
    hermite_table,
    multi_indices,
    scaled_hermite,
)
from ._kernels import (
    degree_grid,
    diag_kernel,
    eigen_residual,
    gram_residual,
    hermite_basis,
    project,
    projection_kernel,
)
from ._plan import HermiteEvalPlan, default_plan

__all__ = [
    "HermiteEvalPlan",
    "default_plan",
    "degree_grid",
    "diag_kernel",
    "eigen_residual",
    "eigenspace_dim",
    "gram_residual",
    "hermite_1d",
    "hermite_basis",
    "hermite_table",
    "multi_indices",
    "project",
    "projection_kernel",
    "scaled_hermite",
]
