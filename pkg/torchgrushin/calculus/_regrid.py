"""Private module; avoid importing from directly.
"""

import warnings

import fannypack
import numpy as np
import scipy.ndimage
import torch

from ._grid import GridFunction


def regrid_clipped_fraction(t: float, f: GridFunction) -> torch.Tensor:
    """Fraction of the energy of `f` that `regrid_dilate(t, f)` cannot represent.

    The dilated samples only see `f` on `|x_j| <= min(t, 1) X`, `|y_j| <= min(t, 1)^2 Y`;
    a two-sample margin inside that window is also counted as lost, since the cubic
    spline reads zeros beyond the grid.

    Args:
        t (float): Dilation factor.
        f (GridFunction): Samples in the space domain.

    Returns:
        torch.Tensor: Fractions in `[0, 1]`, shape `f.batch_shape`.
    """
    spec = f.spec
    shrink = min(t, 1.0)
    points = spec.points
    inside_x = torch.all(
        torch.abs(points.x) <= shrink * spec.x_extent - 2.0 * spec.x_step, dim=-1
    )
    inside_y = torch.all(
        torch.abs(points.y) <= shrink ** 2 * spec.y_extent - 2.0 * spec.y_step, dim=-1
    )
    inside = inside_x & inside_y

    dims = tuple(range(-spec.ndim, 0))
    energy = torch.abs(f.values) ** 2
    total = torch.sum(energy, dim=dims)
    outside = torch.sum(torch.where(inside, torch.zeros_like(energy), energy), dim=dims)
    safe = torch.where(total > 0.0, total, torch.ones_like(total))
    return torch.where(total > 0.0, outside / safe, torch.zeros_like(total))


def regrid_dilate(
    t: float,
    f: GridFunction,
    *,
    order: int = 3,
    clip_threshold: float = 1e-6,
) -> GridFunction:
    """Compose with the anisotropic dilation, `(f o delta_t)(x, y) = f(t x, t^2 y)`,
    by separable spline interpolation on the same grid.

    Args:
        t (float): Dilation factor. Must be positive.
        f (GridFunction): Samples in the space domain.

    Keyword Args:
        order (int, optional): Spline order. Defaults to cubic.
        clip_threshold (float, optional): Energy fraction above which clipping or
            extrapolation is flagged with a `RuntimeWarning`.

    Returns:
        GridFunction: Dilated samples.
    """
    if not t > 0.0:
        raise ValueError(f"Dilation factor must be positive, got {t}.")
    if f.frequency:
        raise ValueError("Regridding acts on the space domain.")
    if t == 1.0:
        return f.clone()

    clipped = regrid_clipped_fraction(t, f)
    if clipped.numel() > 0 and float(torch.max(clipped)) > clip_threshold:
        warnings.warn(
            f"regrid_dilate(t={t:g}) clips or extrapolates"
            f" {float(torch.max(clipped)):.2e} of the input energy.",
            RuntimeWarning,
            stacklevel=2,
        )

    spec = f.spec
    x_index = fannypack.utils.to_numpy(
        (t * spec.x_axis + spec.x_extent) / spec.x_step
    )
    y_index = fannypack.utils.to_numpy(
        (t ** 2 * spec.y_axis + spec.y_extent) / spec.y_step
    )
    coordinates = np.stack(
        np.meshgrid(*([x_index] * spec.d1 + [y_index] * spec.d2), indexing="ij"), axis=0
    )

    samples = fannypack.utils.to_numpy(f.values).reshape((-1,) + spec.shape)
    output = np.empty_like(samples)
    for i in range(samples.shape[0]):
        real = scipy.ndimage.map_coordinates(
            samples[i].real, coordinates, order=order, mode="constant", cval=0.0
        )
        imag = scipy.ndimage.map_coordinates(
            samples[i].imag, coordinates, order=order, mode="constant", cval=0.0
        )
        output[i] = real + 1j * imag

    values = torch.from_numpy(output.reshape(f.values.shape))
    return f.with_values(values)
