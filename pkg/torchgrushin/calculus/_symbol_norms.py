"""Private module; avoid importing from directly.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import torch

from ._bumps import DyadicBump
from ._symbols import Symbol1D, from_samples, warn_if_aliased


@dataclass(frozen=True)
class SymbolGrid:
    """Uniform one-dimensional grid for Fourier transforms of symbols.

    Samples sit at `-half_width + j * step`, `step = 2 * half_width / n`; transforms use
    `F^(xi) = int F(lambda) exp(-i lambda xi) d lambda` at `xi = 2 pi fftfreq(n, step)`.

    Keyword Args:
        half_width (float): Half-width `W` of the sampled window.
        n (int): Number of samples.
    """

    half_width: float = 64.0
    n: int = 2 ** 16

    def __post_init__(self) -> None:
        if not self.half_width > 0.0 or self.n < 2:
            raise ValueError("Symbol grids need a positive width and at least two samples.")

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def samples(self) -> torch.Tensor:
        """torch.Tensor: Sample locations, shape `(n,)`."""
        return torch.arange(self.n, dtype=torch.float64) * self.step - self.half_width

    @property
    def frequencies(self) -> torch.Tensor:
        """torch.Tensor: Dual variable in FFT order, shape `(n,)`."""
        return 2.0 * math.pi * torch.fft.fftfreq(self.n, d=self.step, dtype=torch.float64)

    @property
    def resolved_frequencies(self) -> torch.Tensor:
        """torch.Tensor: `frequencies`, with the zero bin moved to the edge `pi / (2 W)` of
        its cell.

        A window of length `2 W` cannot tell frequencies below that edge apart from the
        mean, so dyadic cutoffs read the zero bin at the lowest resolved frequency. This
        keeps `sum_j chi_j = 1` on every bin, the zero bin included.
        """
        xi = self.frequencies.clone()
        xi[0] = 0.5 * math.pi / self.half_width
        return xi


def _transform(F: Symbol1D, grid: SymbolGrid) -> torch.Tensor:
    """Discrete `F^` without the grid-origin phase `exp(i W xi)`, which cancels in
    magnitudes and on inversion."""
    return grid.step * torch.fft.fft(F(grid.samples))


def dyadic_piece(
    F: Symbol1D,
    j: int,
    bump: DyadicBump,
    *,
    grid: SymbolGrid = SymbolGrid(),
) -> Symbol1D:
    """Frequency-localized piece `F^{(j)} = (F^ chi_j)^v`.

    Cutoffs are read on `SymbolGrid.resolved_frequencies`, so the mean of `F` is
    carried by the pieces at the lowest resolved scale and the sum of all pieces
    rebuilds `F`.

    Args:
        F (Symbol1D): Symbol. Aliasing is flagged if its support is not inside
            `[-W/2, W/2]`.
        j (int): Dyadic index.
        bump (DyadicBump): Partition of unity.

    Keyword Args:
        grid (SymbolGrid, optional): Transform grid.

    Returns:
        Symbol1D: Piece, interpolated from the grid samples.
    """
    warn_if_aliased(F, grid.half_width)
    transformed = _transform(F, grid) * bump.piece(j, grid.resolved_frequencies)
    values = torch.fft.ifft(transformed) / grid.step
    return from_samples(grid.samples, values, name=f"{F.name}^({j})")


def dyadic_pieces_sum(
    F: Symbol1D,
    j_range: Sequence[int],
    bump: DyadicBump,
    *,
    grid: SymbolGrid = SymbolGrid(),
) -> torch.Tensor:
    """Samples of `sum_j F^{(j)}` over `j_range` on the grid."""
    warn_if_aliased(F, grid.half_width)
    xi = grid.resolved_frequencies
    window = torch.zeros(grid.n, dtype=torch.float64)
    for j in j_range:
        window = window + bump.piece(j, xi)
    return torch.fft.ifft(_transform(F, grid) * window) / grid.step


def sobolev_norm(F: Symbol1D, s: float, *, grid: SymbolGrid = SymbolGrid()) -> float:
    """Sobolev norm `(int (1 + |xi|^2)^s |F^(xi)|^2 d xi / (2 pi))^{1/2}`, normalized so
    that `s = 0` gives `||F||_2`.

    Args:
        F (Symbol1D): Symbol.
        s (float): Order, `s >= 0`.

    Keyword Args:
        grid (SymbolGrid, optional): Transform grid.

    Returns:
        float: Norm.
    """
    if s < 0.0:
        raise ValueError(f"Sobolev order must be nonnegative, got {s}.")
    warn_if_aliased(F, grid.half_width)
    weight = (1.0 + grid.frequencies ** 2) ** s
    energy = torch.sum(weight * torch.abs(_transform(F, grid)) ** 2) / (grid.n * grid.step)
    return float(torch.sqrt(energy))


def log_spaced_scales(
    *, per_decade: int = 64, decades: float = 4.0, center: float = 1.0
) -> torch.Tensor:
    """Log-spaced scales spanning `decades` decades around `center`."""
    count = int(round(per_decade * decades)) + 1
    exponents = np.linspace(-0.5 * decades, 0.5 * decades, count)
    return torch.as_tensor(center * 10.0 ** exponents, dtype=torch.float64)


def sloc_norm(
    F: Symbol1D,
    s: float,
    eta_bump: Symbol1D,
    t_grid: Optional[Sequence[float]] = None,
    *,
    grid: SymbolGrid = SymbolGrid(),
) -> float:
    """Lower approximation `max_t ||eta_bump * F(t .)||_{L^2_s}` of the scale-invariant
    local Sobolev norm `sup_{t > 0} ||eta F(t .)||_{L^2_s}`.

    Args:
        F (Symbol1D): Symbol.
        s (float): Sobolev order.
        eta_bump (Symbol1D): Nonzero cutoff supported in `(0, inf)`.
        t_grid (Sequence[float], optional): Scales; defaults to 64 points per decade
            over 4 decades around 1.

    Keyword Args:
        grid (SymbolGrid, optional): Transform grid.

    Returns:
        float: Norm estimate.
    """
    if not eta_bump.support[0] > 0.0:
        raise ValueError("The cutoff must be supported in (0, inf).")
    scales = log_spaced_scales() if t_grid is None else torch.as_tensor(t_grid, dtype=torch.float64)
    if torch.any(scales <= 0.0):
        raise ValueError("Scales must be positive.")

    best = 0.0
    for t in scales.tolist():
        localized = Symbol1D(
            fn=lambda lam, t=t: eta_bump(lam) * F(t * lam),
            support=eta_bump.support,
            name=f"{F.name}(t={t:g})",
        )
        best = max(best, sobolev_norm(localized, s, grid=grid))
    return best
