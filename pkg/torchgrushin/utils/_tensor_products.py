"""Private module; avoid importing from directly.
"""

import string

import torch

_GRID_LETTERS = string.ascii_lowercase[:8]


def contract_axes(values: torch.Tensor, matrix: torch.Tensor, d: int) -> torch.Tensor:
    """Apply the same matrix along each of the trailing `d` axes of `values`.

    Computes `out[..., j_1, ..., j_d] = sum_i values[..., i_1, ..., i_d]
    * prod_m matrix[..., i_m, j_m]`. Leading dimensions of `matrix` (if any) broadcast
    against the leading dimensions of `values`, which is how we apply a different
    one-dimensional basis per y-frequency.

    Args:
        values (torch.Tensor): Shape `(*batch, n, ..., n)` with `d` trailing axes.
        matrix (torch.Tensor): Shape `(*batch_m, n, m)`.
        d (int): Number of trailing axes to contract.

    Returns:
        torch.Tensor: Shape `(*batch, m, ..., m)`.
    """
    assert 1 <= d <= len(_GRID_LETTERS)
    matrix = matrix.to(values.dtype)
    grid = _GRID_LETTERS[:d]
    out = values
    for axis in range(d):
        out_grid = grid[:axis] + "z" + grid[axis + 1 :]
        out = torch.einsum(f"...{grid},...{grid[axis]}z->...{out_grid}", out, matrix)
    return out


def composition_sum(factors: torch.Tensor, k: int) -> torch.Tensor:
    """Sum of `prod_j factors[nu_j, ..., j]` over all multi-indices with `|nu|_1 = k`.

    The sum over compositions of `k` is the `k`-th coefficient of the product of the
    per-axis generating sequences, so we convolve axis by axis instead of enumerating
    multi-indices.

    Args:
        factors (torch.Tensor): Shape `(k + 1, ..., d)`.
        k (int): Target 1-norm.

    Returns:
        torch.Tensor: Shape `(...)`.
    """
    assert factors.shape[0] >= k + 1
    d = factors.shape[-1]
    acc = factors[: k + 1, ..., 0]
    for j in range(1, d):
        q = factors[: k + 1, ..., j]
        acc = torch.stack(
            [
                sum(acc[i] * q[m - i] for i in range(m + 1))  # type: ignore
                for m in range(k + 1)
            ]
        )
    return acc[k]
