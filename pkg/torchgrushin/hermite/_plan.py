"""Private module; avoid importing from directly.
"""

import math
from dataclasses import dataclass

import torch


@dataclass(frozen=True)
class HermiteEvalPlan:
    """Sampling plan for Hermite expansions in the first layer.

    The grid is uniform on `[-x_extent, x_extent)` in each of the `d1` axes:
    `x_j = -x_extent + j * step`, `step = 2 * x_extent / n_x`. Integrals are
    evaluated with the trapezoid rule, which for rapidly decaying samples reduces to
    `step^{d1} * sum`.

    Keyword Args:
        d1 (int): First layer dimension.
        k_max (int): Largest retained eigenvalue index.
        x_extent (float): Half-width of the grid.
        n_x (int): Samples per axis.
        orthonormalize (bool): Re-orthonormalize sampled bases under the grid
            quadrature. Defaults to `True`.
    """

    d1: int
    k_max: int
    x_extent: float
    n_x: int
    orthonormalize: bool = True

    quadrature = "trapezoid"
    """str: Quadrature rule used for all inner products."""

    def __post_init__(self) -> None:
        if self.d1 < 1:
            raise ValueError(f"Dimension must be positive, got {self.d1}.")
        if self.k_max < 0:
            raise ValueError(f"k_max must be nonnegative, got {self.k_max}.")
        if self.n_x < 2:
            raise ValueError(f"Need at least two samples per axis, got {self.n_x}.")
        if not self.x_extent > 0.0:
            raise ValueError(f"Extent must be positive, got {self.x_extent}.")
        if self.orthonormalize and self.k_max + 1 > self.n_x:
            raise ValueError(
                f"Cannot orthonormalize {self.k_max + 1} functions on {self.n_x} samples."
            )

    @property
    def step(self) -> float:
        """float: Grid spacing."""
        return 2.0 * self.x_extent / self.n_x

    @property
    def cell_volume(self) -> float:
        """float: Quadrature weight of a single grid point."""
        return self.step ** self.d1

    @property
    def x_grid(self) -> torch.Tensor:
        """torch.Tensor: One-dimensional sample axis, shape `(n_x,)`."""
        return torch.arange(self.n_x, dtype=torch.float64) * self.step - self.x_extent

    @property
    def points(self) -> torch.Tensor:
        """torch.Tensor: All grid points, shape `(n_x, ..., n_x, d1)`."""
        axes = torch.meshgrid(*([self.x_grid] * self.d1), indexing="ij")
        return torch.stack(axes, dim=-1)

    def refined(self, factor: int = 2) -> "HermiteEvalPlan":
        """Same extent, `factor` times as many samples per axis."""
        return HermiteEvalPlan(
            d1=self.d1,
            k_max=self.k_max,
            x_extent=self.x_extent,
            n_x=self.n_x * factor,
            orthonormalize=self.orthonormalize,
        )


def default_plan(d1: int, k_max: int, r: float = 1.0) -> HermiteEvalPlan:
    """Plan whose extent places the `k_max` turning point `sqrt(2 k_max + 1) / sqrt(r)`
    inside `[-x_extent / 2, x_extent / 2]`, with a spacing of a quarter of the
    Nyquist spacing of the fastest retained oscillation.

    Args:
        d1 (int): First layer dimension.
        k_max (int): Largest retained eigenvalue index.
        r (float, optional): Frequency magnitude the plan should resolve.

    Returns:
        HermiteEvalPlan: Plan with a power-of-two sample count.
    """
    if not r > 0.0:
        raise ValueError(f"`r` must be positive, got {r}.")
    turning_point = math.sqrt(2 * k_max + 1) / math.sqrt(r)
    x_extent = 2.0 * turning_point
    max_step = math.pi / (4.0 * math.sqrt(2 * k_max + 1) * math.sqrt(r))

    n_x = 16
    while 2.0 * x_extent / n_x > max_step or n_x < k_max + 1:
        n_x *= 2
    return HermiteEvalPlan(d1=d1, k_max=k_max, x_extent=x_extent, n_x=n_x)
