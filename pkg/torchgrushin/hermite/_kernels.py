"""Private module; avoid importing from directly.
"""

import math
from typing import Optional, Union

import torch

from .. import types, utils
from ._functions import _check_positive, hermite_table, scaled_hermite
from ._plan import HermiteEvalPlan


def hermite_basis(
    plan: HermiteEvalPlan,
    r: Union[float, torch.Tensor],
    *,
    orthonormalize: Optional[bool] = None,
) -> torch.Tensor:
    """Sampled one-dimensional scaled Hermite functions `r^{1/4} h_l(r^{1/2} x)`.

    With orthonormalization enabled, the columns are re-orthonormalized under the grid
    quadrature in order of increasing degree (QR with a positive diagonal). Gram-Schmidt
    in degree order preserves the span of `{p(x) exp(-r x^2 / 2) : deg p <= l}`, so
    well-resolved columns are left unchanged up to quadrature error, while every
    discrete projection built from the basis becomes exactly orthogonal.

    Args:
        plan (HermiteEvalPlan): Sampling plan.
        r (float or torch.Tensor): Frequency magnitude(s). A tensor of shape `(E,)`
            produces one basis per entry.

    Keyword Args:
        orthonormalize (bool, optional): Overrides `plan.orthonormalize`.

    Returns:
        torch.Tensor: Shape `(n_x, k_max + 1)`, or `(E, n_x, k_max + 1)` for tensor `r`.
    """
    if orthonormalize is None:
        orthonormalize = plan.orthonormalize

    r_tensor = torch.as_tensor(r, dtype=torch.float64)
    if torch.any(r_tensor <= 0.0):
        raise ValueError("Frequency magnitudes must be positive.")
    batched = r_tensor.dim() > 0
    r_tensor = r_tensor.reshape(-1)

    x = plan.x_grid
    u = torch.sqrt(r_tensor)[:, None] * x[None, :]
    table = hermite_table(plan.k_max, u)
    assert table.shape == (plan.k_max + 1, r_tensor.shape[0], plan.n_x)

    basis = (r_tensor[:, None, None] ** 0.25) * table.permute(1, 2, 0)
    if orthonormalize:
        root_step = math.sqrt(plan.step)
        q, upper = torch.linalg.qr(root_step * basis)
        signs = torch.sign(torch.diagonal(upper, dim1=-2, dim2=-1))
        signs = torch.where(signs == 0.0, torch.ones_like(signs), signs)
        basis = q * signs[:, None, :] / root_step

    assert basis.shape == (r_tensor.shape[0], plan.n_x, plan.k_max + 1)
    return basis if batched else basis[0]


def projection_kernel(
    k: types.EigenIndex,
    r: float,
    x: types.XPointsTorch,
    a: types.XPointsTorch,
) -> torch.Tensor:
    """Integral kernel of the eigenspace projection,
    `K_k^eta(x, a) = sum_{|nu|_1 = k} Phi_nu^eta(x) Phi_nu^eta(a)`.

    Args:
        k (EigenIndex): Eigenvalue index.
        r (float): Frequency magnitude `|eta|`. Must be positive.
        x (torch.Tensor): Points, shape `(..., d1)`.
        a (torch.Tensor): Points, broadcastable against `x`.

    Returns:
        torch.Tensor: Kernel values with the broadcast batch shape.
    """
    _check_positive(r, "r")
    x = torch.as_tensor(x, dtype=torch.float64)
    a = torch.as_tensor(a, dtype=torch.float64)
    assert x.shape[-1] == a.shape[-1] == k.d1
    x, a = torch.broadcast_tensors(x, a)

    sqrt_r = math.sqrt(r)
    factors = hermite_table(k.k, sqrt_r * x) * hermite_table(k.k, sqrt_r * a)
    return r ** (k.d1 / 2.0) * utils.composition_sum(factors, k.k)


def diag_kernel(
    k: types.EigenIndex, r: float, x: types.XPointsTorch
) -> torch.Tensor:
    """Diagonal `H_k^eta(x) = K_k^eta(x, x)` of the projection kernel.

    Args:
        k (EigenIndex): Eigenvalue index.
        r (float): Frequency magnitude `|eta|`. Must be positive.
        x (torch.Tensor): Points, shape `(..., d1)`.

    Returns:
        torch.Tensor: Nonnegative values, shape `(...)`.
    """
    _check_positive(r, "r")
    x = torch.as_tensor(x, dtype=torch.float64)
    assert x.shape[-1] == k.d1

    sqrt_r = math.sqrt(r)
    factors = hermite_table(k.k, sqrt_r * x) ** 2
    return r ** (k.d1 / 2.0) * utils.composition_sum(factors, k.k)


def degree_grid(d1: int, k_max: int) -> torch.Tensor:
    """Tensor of `|nu|_1` over `{0, ..., k_max}^{d1}`, shape `(k_max + 1,) * d1`."""
    ell = torch.arange(k_max + 1)
    total = torch.zeros((k_max + 1,) * d1, dtype=torch.long)
    for j in range(d1):
        shape = [1] * d1
        shape[j] = k_max + 1
        total = total + ell.reshape(shape)
    return total


def project(
    k: types.EigenIndex,
    r: float,
    g: torch.Tensor,
    plan: HermiteEvalPlan,
) -> torch.Tensor:
    """Eigenspace projection `P_k^eta g = sum_{|nu|_1 = k} (g, Phi_nu^eta) Phi_nu^eta`,
    with inner products evaluated by grid quadrature.

    Args:
        k (EigenIndex): Eigenvalue index. Must satisfy `k.k <= plan.k_max`.
        r (float): Frequency magnitude `|eta|`. Must be positive.
        g (torch.Tensor): Samples on the plan grid, shape `(*batch, n_x, ..., n_x)`.
        plan (HermiteEvalPlan): Sampling plan.

    Returns:
        torch.Tensor: Projected samples, same shape as `g`.
    """
    _check_positive(r, "r")
    if plan.n_x == 0 or g.numel() == 0:
        raise ValueError("Cannot project on an empty grid.")
    assert k.d1 == plan.d1
    assert k.k <= plan.k_max, "Plan does not retain the requested eigenspace"
    assert g.shape[-plan.d1 :] == (plan.n_x,) * plan.d1

    basis = hermite_basis(plan, r)
    coefficients = plan.cell_volume * utils.contract_axes(g, basis, plan.d1)
    mask = degree_grid(plan.d1, plan.k_max) == k.k
    coefficients = coefficients * mask.to(coefficients.dtype)
    return utils.contract_axes(coefficients, basis.transpose(-1, -2), plan.d1)


def gram_residual(plan: HermiteEvalPlan, r: float = 1.0) -> float:
    """Largest entry of `|Gram - I|` for the raw sampled functions
    `{Phi_nu^eta : |nu|_1 <= k_max}` under grid quadrature.

    Args:
        plan (HermiteEvalPlan): Sampling plan.
        r (float, optional): Frequency magnitude.

    Returns:
        float: Orthonormality defect.
    """
    basis = hermite_basis(plan, r, orthonormalize=False)
    gram_1d = plan.step * basis.T @ basis

    # Enumerate retained multi-indices; the tensor Gram matrix factorizes per axis
    degrees = degree_grid(plan.d1, plan.k_max)
    nus = torch.nonzero(degrees <= plan.k_max)
    gram = torch.ones((nus.shape[0], nus.shape[0]), dtype=torch.float64)
    for j in range(plan.d1):
        gram = gram * gram_1d[nus[:, j][:, None], nus[:, j][None, :]]
    identity = torch.eye(nus.shape[0], dtype=torch.float64)
    return float(torch.max(torch.abs(gram - identity)))


def eigen_residual(nu: types.MultiIndex, r: float, plan: HermiteEvalPlan) -> float:
    """Relative residual `||L^eta Phi - [k] r Phi|| / ||Phi||` of a scaled Hermite
    function, with `-Delta_x` discretized by fourth-order finite differences.

    Args:
        nu (MultiIndex): Multi-index.
        r (float): Frequency magnitude `|eta|`.
        plan (HermiteEvalPlan): Sampling plan.

    Returns:
        float: Relative eigen-residual.
    """
    assert nu.d1 == plan.d1
    points = plan.points
    phi = scaled_hermite(nu, r, points)

    dims = tuple(range(plan.d1))
    operator_phi = -utils.laplacian(phi, dims=dims, step=plan.step) + (
        r ** 2
    ) * torch.sum(points ** 2, dim=-1) * phi
    eigenvalue = (2 * nu.length_1 + plan.d1) * r

    residual = torch.linalg.norm(operator_phi - eigenvalue * phi)
    return float(residual / torch.linalg.norm(phi))
