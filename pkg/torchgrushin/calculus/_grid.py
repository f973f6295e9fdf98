"""Private module; avoid importing from directly.
"""

import dataclasses
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Tuple, Union

import torch

from .. import types
from ..hermite import HermiteEvalPlan


@dataclass(frozen=True)
class GridSpec:
    """Discretization of `R^{d1} x R^{d2}` and of the eigenvalue sum over `k`.

    Each x-axis is sampled at `-x_extent + j * x_step`, `x_step = 2 * x_extent / n_x`,
    and likewise for the y-axes. Sample arrays are laid out with the `d1` x-axes first,
    followed by the `d2` y-axes.

    Keyword Args:
        d1 (int): First layer dimension.
        d2 (int): Second layer dimension.
        x_extent (float): Half-width of the grid in each x-axis.
        y_extent (float): Half-width of the grid in each y-axis.
        n_x (int): Samples per x-axis.
        n_y (int): Samples per y-axis.
        k_max (int): Largest retained Hermite eigenvalue index.
    """

    d1: int
    d2: int
    x_extent: float
    y_extent: float
    n_x: int
    n_y: int
    k_max: int

    def __post_init__(self) -> None:
        if self.d1 < 1 or self.d2 < 1:
            raise ValueError(f"Dimensions must be positive, got ({self.d1}, {self.d2}).")
        if self.n_x < 2 or self.n_y < 2:
            raise ValueError(
                f"Need at least two samples per axis, got n_x={self.n_x}, n_y={self.n_y}."
            )
        if not (self.x_extent > 0.0 and self.y_extent > 0.0):
            raise ValueError("Grid extents must be positive.")
        if self.k_max < 0:
            raise ValueError(f"k_max must be nonnegative, got {self.k_max}.")
        if self.k_max + 1 > self.n_x:
            raise ValueError(
                f"k_max={self.k_max} needs at least {self.k_max + 1} samples per x-axis."
            )

    @property
    def x_step(self) -> float:
        """float: Spacing of the x-axes."""
        return 2.0 * self.x_extent / self.n_x

    @property
    def y_step(self) -> float:
        """float: Spacing of the y-axes."""
        return 2.0 * self.y_extent / self.n_y

    @property
    def x_axis(self) -> torch.Tensor:
        """torch.Tensor: Samples of one x-axis, shape `(n_x,)`."""
        return torch.arange(self.n_x, dtype=torch.float64) * self.x_step - self.x_extent

    @property
    def y_axis(self) -> torch.Tensor:
        """torch.Tensor: Samples of one y-axis, shape `(n_y,)`."""
        return torch.arange(self.n_y, dtype=torch.float64) * self.y_step - self.y_extent

    @property
    def x_shape(self) -> Tuple[int, ...]:
        return (self.n_x,) * self.d1

    @property
    def y_shape(self) -> Tuple[int, ...]:
        return (self.n_y,) * self.d2

    @property
    def shape(self) -> Tuple[int, ...]:
        """Tuple[int, ...]: Sample array shape, `(n_x,) * d1 + (n_y,) * d2`."""
        return self.x_shape + self.y_shape

    @property
    def ndim(self) -> int:
        return self.d1 + self.d2

    @property
    def x_cell_volume(self) -> float:
        return self.x_step ** self.d1

    @property
    def y_cell_volume(self) -> float:
        return self.y_step ** self.d2

    @property
    def cell_volume(self) -> float:
        """float: Quadrature weight of a single grid point."""
        return self.x_cell_volume * self.y_cell_volume

    @property
    def eta_axis(self) -> torch.Tensor:
        """torch.Tensor: Frequencies of one y-axis in FFT order, shape `(n_y,)`."""
        return 2.0 * math.pi * torch.fft.fftfreq(self.n_y, d=self.y_step, dtype=torch.float64)

    @property
    def xi_axis(self) -> torch.Tensor:
        """torch.Tensor: Frequencies of one x-axis in FFT order, shape `(n_x,)`."""
        return 2.0 * math.pi * torch.fft.fftfreq(self.n_x, d=self.x_step, dtype=torch.float64)

    @property
    def eta_points(self) -> torch.Tensor:
        """torch.Tensor: All y-frequencies, shape `(n_y, ..., n_y, d2)`."""
        axes = torch.meshgrid(*([self.eta_axis] * self.d2), indexing="ij")
        return torch.stack(axes, dim=-1)

    @property
    def eta_magnitudes(self) -> torch.Tensor:
        """torch.Tensor: `|eta|` over the frequency grid, shape `(n_y,) * d2`."""
        return torch.linalg.norm(self.eta_points, dim=-1)

    @property
    def eta_min(self) -> float:
        """float: Smallest nonzero frequency magnitude."""
        return 2.0 * math.pi / (self.n_y * self.y_step)

    @property
    def frequency_weight(self) -> float:
        """float: Measure `(2 pi)^{-d2} d eta` of a single frequency cell."""
        return (1.0 / (self.n_y * self.y_step)) ** self.d2

    @property
    def x_points(self) -> types.XPointsTorch:
        """torch.Tensor: First layer coordinates over the full grid,
        shape `(*shape, d1)`."""
        return self.points.x

    @property
    def points(self) -> types.CCPoint:
        """CCPoint: Coordinates of every grid point, each layer with shape
        `(*shape, d)`."""
        axes = [self.x_axis] * self.d1 + [self.y_axis] * self.d2
        mesh = torch.stack(torch.meshgrid(*axes, indexing="ij"), dim=-1)
        return types.CCPoint(x=mesh[..., : self.d1], y=mesh[..., self.d1 :])

    def hermite_plan(self) -> HermiteEvalPlan:
        """Hermite sampling plan matching the x-axes of this grid."""
        return HermiteEvalPlan(
            d1=self.d1, k_max=self.k_max, x_extent=self.x_extent, n_x=self.n_x
        )

    def nearest_index(self, z: types.CCPoint) -> Tuple[int, ...]:
        """Multi-index of the grid point closest to a single point `z`."""
        x = torch.as_tensor(z.x, dtype=torch.float64).reshape(-1)
        y = torch.as_tensor(z.y, dtype=torch.float64).reshape(-1)
        assert x.shape == (self.d1,) and y.shape == (self.d2,)
        ix = torch.round((x + self.x_extent) / self.x_step).to(torch.long)
        iy = torch.round((y + self.y_extent) / self.y_step).to(torch.long)
        if torch.any((ix < 0) | (ix >= self.n_x)) or torch.any((iy < 0) | (iy >= self.n_y)):
            raise ValueError("Point lies outside the grid extent.")
        return tuple(int(i) for i in ix) + tuple(int(i) for i in iy)

    def refined(self, factor: int = 2) -> "GridSpec":
        """Same extents, `factor` times as many samples per axis."""
        return dataclasses.replace(self, n_x=self.n_x * factor, n_y=self.n_y * factor)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @staticmethod
    def from_dict(fields: Dict[str, Any]) -> "GridSpec":
        """Inverse of `to_dict()`; unknown keys raise `ValueError`."""
        known = {f.name for f in dataclasses.fields(GridSpec)}
        unknown = set(fields.keys()) - known
        if len(unknown) > 0:
            raise ValueError(f"Unknown grid fields: {sorted(unknown)}")
        return GridSpec(
            d1=int(fields["d1"]),
            d2=int(fields["d2"]),
            x_extent=float(fields["x_extent"]),
            y_extent=float(fields["y_extent"]),
            n_x=int(fields["n_x"]),
            n_y=int(fields["n_y"]),
            k_max=int(fields["k_max"]),
        )


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples of a function over a `GridSpec`.

    `values` has shape `(*batch, *spec.shape)`. When `frequency` is set, the y-axes
    hold the partial Fourier transform `F_2 f(x, eta)` in FFT order.
    """

    spec: GridSpec
    values: types.SamplesTorch
    frequency: bool = False

    def __post_init__(self) -> None:
        values = torch.as_tensor(self.values)
        if values.dim() < self.spec.ndim or tuple(values.shape[-self.spec.ndim :]) != self.spec.shape:
            raise ValueError(
                f"Sample shape {tuple(values.shape)} does not match grid {self.spec.shape}."
            )
        object.__setattr__(self, "values", values.to(torch.complex128))

    @property
    def batch_shape(self) -> Tuple[int, ...]:
        return tuple(self.values.shape[: -self.spec.ndim])

    @staticmethod
    def from_callable(
        spec: GridSpec,
        fn: Callable[[torch.Tensor, torch.Tensor], torch.Tensor],
    ) -> "GridFunction":
        """Sample `fn(x, y)`, where `x` and `y` have shapes `(*spec.shape, d1)` and
        `(*spec.shape, d2)`."""
        points = spec.points
        return GridFunction(spec=spec, values=fn(points.x, points.y))

    @staticmethod
    def zeros(spec: GridSpec) -> "GridFunction":
        return GridFunction(spec=spec, values=torch.zeros(spec.shape, dtype=torch.complex128))

    def with_values(self, values: torch.Tensor) -> "GridFunction":
        """Copy carrying new samples on the same grid and in the same domain."""
        return GridFunction(spec=self.spec, values=values, frequency=self.frequency)

    def clone(self) -> "GridFunction":
        return self.with_values(self.values.clone())

    def norm(self) -> torch.Tensor:
        """Continuum-normalized `L^2` norm, one value per batch entry."""
        return lp_norm(self, 2.0)

    def inner(self, other: "GridFunction") -> torch.Tensor:
        """Quadrature inner product `<self, other> = int self * conj(other)`."""
        assert self.spec == other.spec and not self.frequency and not other.frequency
        dims = tuple(range(-self.spec.ndim, 0))
        return self.spec.cell_volume * torch.sum(
            self.values * torch.conj(other.values), dim=dims
        )

    def __add__(self, other: "GridFunction") -> "GridFunction":
        assert self.spec == other.spec and self.frequency == other.frequency
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        assert self.spec == other.spec and self.frequency == other.frequency
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: Union[float, complex]) -> "GridFunction":
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__


def lp_norm(f: GridFunction, p: float) -> torch.Tensor:
    """Discrete `L^p` norm `(cell_volume * sum |f|^p)^{1/p}`; `p = inf` gives the
    largest magnitude. Reduces over grid axes only.

    Args:
        f (GridFunction): Samples in the space domain.
        p (float): Exponent, `p >= 1`.

    Returns:
        torch.Tensor: Norms with shape `f.batch_shape`.
    """
    if f.frequency:
        raise ValueError("L^p norms are taken in the space domain.")
    if not p >= 1.0:
        raise ValueError(f"Exponent must satisfy p >= 1, got {p}.")
    dims = tuple(range(-f.spec.ndim, 0))
    magnitude = torch.abs(f.values)
    if math.isinf(p):
        return torch.amax(magnitude, dim=dims)
    if p == 2.0:
        return torch.sqrt(f.spec.cell_volume * torch.sum(magnitude ** 2, dim=dims))
    return (f.spec.cell_volume * torch.sum(magnitude ** p, dim=dims)) ** (1.0 / p)


def suggest_k_max(spec: GridSpec, lambda_sup: float, *, ceiling: int = 64) -> int:
    """Smallest `k` with `[k] * eta_min > 4 * lambda_sup`, clamped to
    `min(ceiling, n_x - 1)`.

    Args:
        spec (GridSpec): Grid; `eta_min` is its smallest nonzero frequency magnitude.
        lambda_sup (float): Supremum of the `lambda`-support of the symbol.

    Keyword Args:
        ceiling (int, optional): Largest value ever suggested.

    Returns:
        int: Suggested truncation.
    """
    limit = min(ceiling, spec.n_x - 1)
    if not math.isfinite(lambda_sup):
        return limit
    target = 4.0 * max(lambda_sup, 0.0) / spec.eta_min
    k = max(0, math.floor((target - spec.d1) / 2.0) + 1)
    return min(k, limit)
