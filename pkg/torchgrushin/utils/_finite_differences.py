"""Private module; avoid importing from directly.
"""

import torch


def second_difference(
    values: torch.Tensor, *, dim: int, step: float, periodic: bool = False
) -> torch.Tensor:
    """Fourth-order central approximation of the second derivative along one axis.

    Uses the stencil `(-1, 16, -30, 16, -1) / (12 h^2)`. Non-periodic axes are padded
    with zeros, which is accurate for samples that decay towards the boundary.

    Args:
        values (torch.Tensor): Samples.
        dim (int): Axis to differentiate along.
        step (float): Grid spacing along `dim`.

    Keyword Args:
        periodic (bool, optional): Wrap around instead of zero padding.

    Returns:
        torch.Tensor: Second derivative estimate, same shape as `values`.
    """
    if periodic:

        def shifted(offset: int) -> torch.Tensor:
            return torch.roll(values, shifts=-offset, dims=dim)

    else:
        moved = torch.movedim(values, dim, -1)
        padded = torch.nn.functional.pad(moved, (2, 2))
        n = moved.shape[-1]

        def shifted(offset: int) -> torch.Tensor:
            return torch.movedim(padded[..., 2 + offset : 2 + offset + n], -1, dim)

    out = (
        -shifted(-2)
        + 16.0 * shifted(-1)
        - 30.0 * values
        + 16.0 * shifted(1)
        - shifted(2)
    ) / (12.0 * step ** 2)
    assert out.shape == values.shape
    return out


def laplacian(
    values: torch.Tensor, *, dims: tuple, step: float, periodic: bool = False
) -> torch.Tensor:
    """Sum of `second_difference` over several axes with a common spacing."""
    out = torch.zeros_like(values)
    for dim in dims:
        out = out + second_difference(values, dim=dim, step=step, periodic=periodic)
    return out
