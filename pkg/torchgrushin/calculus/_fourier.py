"""Private module; avoid importing from directly.
"""

import torch

from ._grid import GridFunction


def _phase(f: GridFunction) -> torch.Tensor:
    """`exp(i eta . y_0)` with `y_0 = (-y_extent, ..., -y_extent)` the grid origin,
    shape `(n_y,) * d2`."""
    eta_sum = torch.sum(f.spec.eta_points, dim=-1)
    return torch.exp(1j * f.spec.y_extent * eta_sum)


def fourier_y(f: GridFunction) -> GridFunction:
    """Partial Fourier transform `F_2 f(x, eta) = int f(x, y) exp(-i eta y) dy`,
    approximated by `y_step^{d2} * sum` at the frequencies `2 pi fftfreq(n_y, y_step)`.

    The discrete pair satisfies Parseval in the continuum normalization,
    `int |f|^2 = (2 pi)^{-d2} int |F_2 f|^2 d eta`, with
    `spec.frequency_weight` as the measure of one frequency cell.

    Args:
        f (GridFunction): Samples in the space domain.

    Returns:
        GridFunction: Samples with the y-axes in the frequency domain.
    """
    if f.frequency:
        raise ValueError("Grid function is already in the frequency domain.")
    spec = f.spec
    y_dims = tuple(range(-spec.d2, 0))
    spectrum = torch.fft.fftn(f.values, dim=y_dims)
    spectrum = spec.y_cell_volume * _phase(f) * spectrum
    return GridFunction(spec=spec, values=spectrum, frequency=True)


def inverse_fourier_y(f_hat: GridFunction) -> GridFunction:
    """Inverse of `fourier_y()`, `(2 pi)^{-d2} int F(x, eta) exp(i eta y) d eta`.

    Args:
        f_hat (GridFunction): Samples with the y-axes in the frequency domain.

    Returns:
        GridFunction: Samples in the space domain.
    """
    if not f_hat.frequency:
        raise ValueError("Grid function is not in the frequency domain.")
    spec = f_hat.spec
    y_dims = tuple(range(-spec.d2, 0))
    values = torch.fft.ifftn(f_hat.values * torch.conj(_phase(f_hat)), dim=y_dims)
    return GridFunction(spec=spec, values=values / spec.y_cell_volume, frequency=False)
