import math

import pytest
import torch

from torchgrushin import calculus
from torchgrushin.calculus import SymbolGrid


def test_symbol_grid():
    """Sample layout and validation of symbol grids."""
    grid = SymbolGrid(half_width=4.0, n=8)
    assert grid.step == 1.0
    torch.testing.assert_close(
        grid.samples, torch.arange(-4.0, 4.0, dtype=torch.float64)
    )
    with pytest.raises(ValueError):
        SymbolGrid(half_width=0.0)


def test_sobolev_norm_gaussian():
    """`||exp(-lambda^2 / 2)||_{L^2_s}^2` equals `sqrt(pi)` at order 0 and
    `1.5 sqrt(pi)` at order 1."""
    F = calculus.gaussian(1.0)
    assert calculus.sobolev_norm(F, 0.0) == pytest.approx(math.pi ** 0.25, rel=1e-8)
    assert calculus.sobolev_norm(F, 1.0) ** 2 == pytest.approx(
        1.5 * math.sqrt(math.pi), rel=1e-8
    )
    with pytest.raises(ValueError):
        calculus.sobolev_norm(F, -1.0)


def test_sobolev_norm_monotone_in_order():
    """Higher orders give larger norms."""
    F = calculus.smooth_bump(0.5, 2.0)
    norms = [calculus.sobolev_norm(F, s) for s in (0.0, 0.5, 1.0, 2.0)]
    assert all(a < b for a, b in zip(norms[:-1], norms[1:]))


def test_dyadic_pieces_rebuild_bump():
    """Pieces with `|j| <= 20` rebuild a compactly supported bump, mean included."""
    grid = SymbolGrid()
    F = calculus.smooth_bump(0.25, 4.0)
    total = calculus.dyadic_pieces_sum(F, range(-20, 21), calculus.SmoothDyadicBump(), grid=grid)
    residual = torch.sqrt(torch.sum(torch.abs(total - F(grid.samples)) ** 2) * grid.step)
    assert float(residual) <= 1e-6


def test_dyadic_pieces_below_resolution():
    """Pieces far below the lowest resolved frequency carry nothing, not even the mean."""
    grid = SymbolGrid(half_width=64.0, n=2 ** 13)
    F = calculus.gaussian(1.0)
    low = calculus.dyadic_pieces_sum(F, range(-40, -20), calculus.SmoothDyadicBump(), grid=grid)
    assert float(torch.max(torch.abs(low))) == 0.0

    xi = grid.resolved_frequencies
    assert float(xi[0]) == pytest.approx(math.pi / 128.0)
    torch.testing.assert_close(xi[1:], grid.frequencies[1:])


def test_dyadic_piece_interpolates():
    """A single piece matches the corresponding term of the sum on the grid."""
    grid = SymbolGrid(half_width=32.0, n=2 ** 12)
    F = calculus.smooth_bump(0.5, 2.0)
    bump = calculus.HatDyadicBump()
    piece = calculus.dyadic_piece(F, 2, bump, grid=grid)
    torch.testing.assert_close(
        piece(grid.samples),
        calculus.dyadic_pieces_sum(F, [2], bump, grid=grid),
        atol=1e-12,
        rtol=0.0,
    )


def test_sloc_norm():
    """Local Sobolev norms dominate the unscaled piece and are dilation invariant."""
    grid = SymbolGrid(half_width=32.0, n=2 ** 12)
    F = calculus.bochner_riesz(2.0, 1.0)
    eta = calculus.smooth_bump(0.25, 1.0)

    unscaled = calculus.sobolev_norm(eta * F, 1.0, grid=grid)
    estimate = calculus.sloc_norm(F, 1.0, eta, [0.5, 1.0, 2.0], grid=grid)
    assert estimate >= unscaled * (1.0 - 1e-12)

    dilated = calculus.sloc_norm(F.scaled(2.0), 1.0, eta, [0.25, 0.5, 1.0], grid=grid)
    assert dilated == pytest.approx(estimate, rel=1e-12)

    with pytest.raises(ValueError):
        calculus.sloc_norm(F, 1.0, calculus.smooth_bump(-1.0, 1.0), [1.0], grid=grid)
    with pytest.raises(ValueError):
        calculus.sloc_norm(F, 1.0, eta, [0.0, 1.0], grid=grid)


def test_log_spaced_scales():
    """Scales are log-spaced around their center."""
    scales = calculus.log_spaced_scales(per_decade=4, decades=2.0, center=3.0)
    assert scales.shape == (9,)
    assert float(scales[0]) == pytest.approx(0.3)
    assert float(scales[4]) == pytest.approx(3.0)
    assert float(scales[-1]) == pytest.approx(30.0)


def test_aliasing_warning():
    """Symbols wider than half the grid are flagged."""
    with pytest.warns(RuntimeWarning):
        calculus.sobolev_norm(calculus.gaussian(1.0), 0.0, grid=SymbolGrid(half_width=8.0, n=256))
