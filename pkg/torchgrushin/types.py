"""Data structures and semantic type aliases for the Grushin calculus.
"""
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import torch

# Make an explicit list of names to expose
__all__ = [
    "RealTorch",
    "ComplexTorch",
    "XPointsTorch",
    "YPointsTorch",
    "SamplesTorch",
    "SpectrumTorch",
    "MaskTorch",
    "MultiIndex",
    "EigenIndex",
    "CCPoint",
    "Ball",
]

RealTorch = torch.Tensor
"""Real `torch.Tensor`; we use float64 throughout."""
ComplexTorch = torch.Tensor
"""Complex `torch.Tensor`; we use complex128 throughout."""

XPointsTorch = torch.Tensor
"""Points in the first layer. Shape should be `(..., d1)`."""
YPointsTorch = torch.Tensor
"""Points in the second layer. Shape should be `(..., d2)`."""

SamplesTorch = torch.Tensor
"""Complex samples over a product grid, shape `(*batch, n_x, ..., n_x, n_y, ..., n_y)`
with `d1` x-axes followed by `d2` y-axes."""
SpectrumTorch = torch.Tensor
"""Same layout as `SamplesTorch`, but the y-axes hold frequencies (FFT order)."""

MaskTorch = torch.Tensor
"""Boolean `torch.Tensor` selecting grid points."""


@dataclass(frozen=True)
class MultiIndex:
    """Multi-index nu in N^{d1}, used to label tensor-product Hermite functions."""

    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) == 0:
            raise ValueError("Multi-index needs at least one entry.")
        if any(int(e) < 0 for e in self.entries):
            raise ValueError(f"Multi-index entries must be nonnegative: {self.entries}")

    @property
    def d1(self) -> int:
        """int: Length of the multi-index."""
        return len(self.entries)

    @property
    def length_1(self) -> int:
        """int: The 1-norm `|nu|_1`, i.e. the eigenvalue index `k` this belongs to."""
        return int(sum(self.entries))


@dataclass(frozen=True)
class EigenIndex:
    """Eigenvalue label of the scaled Hermite operator. The `k`-th eigenvalue of
    `-Delta_x + |x|^2 |eta|^2` is `bracket * |eta|`, where `bracket = 2k + d1`."""

    k: int
    d1: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError(f"Eigenvalue index must be nonnegative, got {self.k}.")
        if self.d1 < 1:
            raise ValueError(f"Dimension must be positive, got {self.d1}.")

    @property
    def bracket(self) -> int:
        """int: `[k] = 2k + d1`."""
        return 2 * self.k + self.d1


class CCPoint(NamedTuple):
    """Point (or batch of points) in R^{d1} x R^{d2}."""

    x: XPointsTorch
    y: YPointsTorch

    @staticmethod
    def from_coordinates(coordinates, d1: int, d2: int) -> "CCPoint":
        """Split a flat coordinate vector `(x_1, ..., x_d1, y_1, ..., y_d2)`.

        Args:
            coordinates (array-like): Flat coordinates. Shape `(..., d1 + d2)`.
            d1 (int): First layer dimension.
            d2 (int): Second layer dimension.

        Returns:
            CCPoint: Split point.
        """
        coordinates = torch.as_tensor(coordinates, dtype=torch.float64)
        if coordinates.shape[-1] != d1 + d2:
            raise ValueError(
                f"Expected {d1 + d2} coordinates, got {coordinates.shape[-1]}."
            )
        return CCPoint(x=coordinates[..., :d1], y=coordinates[..., d1:])


@dataclass(frozen=True)
class Ball:
    """Ball `B_R(a, b)` of the Carnot-Caratheodory comparison metric."""

    center: CCPoint
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0.0:
            raise ValueError(f"Ball radius must be positive, got {self.radius}.")

    @property
    def a(self) -> torch.Tensor:
        """torch.Tensor: First layer of the center."""
        return torch.as_tensor(self.center.x, dtype=torch.float64)

    @property
    def b(self) -> torch.Tensor:
        """torch.Tensor: Second layer of the center."""
        return torch.as_tensor(self.center.y, dtype=torch.float64)
