"""Private module; avoid importing from directly.
"""

import math
from typing import Iterator, List, Tuple, Union

import scipy.special
import torch

from .. import types

_H0_SCALE = math.pi ** -0.25

# Working values are renormalized once they pass this magnitude.
_RESCALE_THRESHOLD = 2.0 ** 500


def _scaled_recurrence(
    ell_max: int, u: torch.Tensor
) -> Iterator[Tuple[torch.Tensor, torch.Tensor]]:
    """Run the normalized three-term recurrence with the Gaussian factored out.

    Yields pairs `(value, log_scale)` for degrees `0, ..., ell_max`, with
    `h_ell(u) = value * exp(log_scale)`. The running log-scale starts at `-u^2 / 2`
    and absorbs every renormalization, so neither factor underflows before the
    recurrence has climbed out of the Gaussian tail.
    """
    log_scale = -0.5 * u ** 2
    previous = torch.zeros_like(u)
    current = torch.full_like(u, _H0_SCALE)
    yield current, log_scale
    for m in range(ell_max):
        previous, current = (
            current,
            math.sqrt(2.0 / (m + 1)) * u * current - math.sqrt(m / (m + 1)) * previous,
        )
        magnitude = torch.maximum(previous.abs(), current.abs())
        factor = torch.where(
            magnitude > _RESCALE_THRESHOLD, magnitude, torch.ones_like(magnitude)
        )
        previous = previous / factor
        current = current / factor
        log_scale = log_scale + torch.log(factor)
        yield current, log_scale


def _unscale(value: torch.Tensor, log_scale: torch.Tensor) -> torch.Tensor:
    return torch.sign(value) * torch.exp(torch.log(value.abs()) + log_scale)


def hermite_table(ell_max: int, u: Union[float, torch.Tensor]) -> torch.Tensor:
    """Evaluate the L2-normalized Hermite functions `h_0, ..., h_{ell_max}`.

    Uses the normalized three-term recurrence

        h_{l+1}(u) = u sqrt(2 / (l + 1)) h_l(u) - sqrt(l / (l + 1)) h_{l-1}(u),

    starting from `h_0(u) = pi^{-1/4} exp(-u^2 / 2)`, so no factorials or Hermite
    polynomial values are ever materialized. The Gaussian is carried as a separate
    log-scale, which keeps degrees up to `10^4` accurate for `|u|` up to `10^2`.

    Args:
        ell_max (int): Highest degree to evaluate.
        u (float or torch.Tensor): Evaluation points, any shape.

    Returns:
        torch.Tensor: Values with shape `(ell_max + 1, *u.shape)`.
    """
    if ell_max < 0:
        raise ValueError(f"Degree must be nonnegative, got {ell_max}.")
    u = torch.as_tensor(u, dtype=torch.float64)

    table = u.new_zeros((ell_max + 1,) + tuple(u.shape))
    for ell, (value, log_scale) in enumerate(_scaled_recurrence(ell_max, u)):
        table[ell] = _unscale(value, log_scale)
    return table


def hermite_1d(ell: int, u: Union[float, torch.Tensor]) -> torch.Tensor:
    """Evaluate a single Hermite function `h_ell(u)`.

    Same recurrence as `hermite_table()`, but only the last two degrees are kept in
    memory.

    Args:
        ell (int): Degree.
        u (float or torch.Tensor): Evaluation points.

    Returns:
        torch.Tensor: `h_ell(u)`, same shape as `u`.
    """
    if ell < 0:
        raise ValueError(f"Degree must be nonnegative, got {ell}.")
    u = torch.as_tensor(u, dtype=torch.float64)

    for value, log_scale in _scaled_recurrence(ell, u):
        pass
    return _unscale(value, log_scale)


def scaled_hermite(
    nu: types.MultiIndex, r: float, x: types.XPointsTorch
) -> torch.Tensor:
    """Evaluate the scaled tensor-product Hermite function
    `Phi_nu^eta(x) = |eta|^{d1/4} prod_j h_{nu_j}(|eta|^{1/2} x_j)` with `|eta| = r`.

    Args:
        nu (MultiIndex): Multi-index of length `d1`.
        r (float): Frequency magnitude `|eta|`. Must be positive.
        x (torch.Tensor): Points with shape `(..., d1)`.

    Returns:
        torch.Tensor: Values with shape `(...)`.
    """
    _check_positive(r, "r")
    x = torch.as_tensor(x, dtype=torch.float64)
    assert x.shape[-1] == nu.d1, "Point dimension does not match multi-index"

    sqrt_r = math.sqrt(r)
    out = torch.full(x.shape[:-1], r ** (nu.d1 / 4.0), dtype=torch.float64)
    for j, nu_j in enumerate(nu.entries):
        out = out * hermite_1d(nu_j, sqrt_r * x[..., j])
    return out


def eigenspace_dim(k: int, d1: int) -> int:
    """Dimension of the `k`-th eigenspace, `|{nu in N^{d1} : |nu|_1 = k}|`.

    Args:
        k (int): Eigenvalue index.
        d1 (int): First layer dimension.

    Returns:
        int: `C(k + d1 - 1, d1 - 1)`.
    """
    if k < 0 or d1 < 1:
        raise ValueError(f"Invalid eigenspace (k={k}, d1={d1}).")
    return int(scipy.special.comb(k + d1 - 1, d1 - 1, exact=True))


def multi_indices(k: int, d1: int) -> List[types.MultiIndex]:
    """Enumerate all multi-indices with `|nu|_1 = k`, in lexicographic order.

    Args:
        k (int): Eigenvalue index.
        d1 (int): Length of each multi-index.

    Returns:
        List[MultiIndex]: `eigenspace_dim(k, d1)` multi-indices.
    """
    if k < 0 or d1 < 1:
        raise ValueError(f"Invalid eigenspace (k={k}, d1={d1}).")
    if d1 == 1:
        return [types.MultiIndex((k,))]

    output: List[types.MultiIndex] = []
    for head in range(k + 1):
        for tail in multi_indices(k - head, d1 - 1):
            output.append(types.MultiIndex((head,) + tail.entries))
    return output


def _check_positive(value: float, name: str) -> None:
    if not value > 0.0:
        raise ValueError(f"`{name}` must be positive, got {value}.")
