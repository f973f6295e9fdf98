import warnings

import pytest
import torch
from _grushin_fixtures import bump_1_1, spec_1_1

import torchgrushin
from torchgrushin import calculus
from torchgrushin.calculus import GridFunction, GridSpec


def _small_bump(spec: GridSpec) -> GridFunction:
    return torchgrushin.cli.compact_bump(spec, x_radius=2.0, y_radius=1.5)


def test_regrid_identity(bump_1_1: GridFunction):
    """`t = 1` returns a copy."""
    out = calculus.regrid_dilate(1.0, bump_1_1)
    assert torch.equal(out.values, bump_1_1.values)


def test_regrid_on_nodes(spec_1_1: GridSpec):
    """Where the dilated point is a grid node, spline regridding is exact."""
    f = _small_bump(spec_1_1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        g = calculus.regrid_dilate(0.5, f)

    # (0.5 x_j, 0.25 y_k) is a node for even j and k divisible by four
    torch.testing.assert_close(
        g.values[::2, ::4], f.values[8:24, 12:20], atol=1e-10, rtol=0.0
    )


def test_regrid_round_trip(spec_1_1: GridSpec):
    """Dilating by `t` and then by `1 / t` approximately restores smooth inputs."""
    f = torchgrushin.cli.compact_bump(spec_1_1, x_radius=5.0, y_radius=10.0)
    there = calculus.regrid_dilate(2.0 ** 0.5, f)
    back = calculus.regrid_dilate(2.0 ** -0.5, there)
    error = float(calculus.lp_norm(back - f, 2.0) / calculus.lp_norm(f, 2.0))
    assert error < 0.1


def test_regrid_clipping(bump_1_1: GridFunction, spec_1_1: GridSpec):
    """Clipped energy is measured and flagged."""
    assert float(calculus.regrid_clipped_fraction(0.5, _small_bump(spec_1_1))) == 0.0
    assert float(calculus.regrid_clipped_fraction(2.0, bump_1_1)) == 0.0

    fraction = float(calculus.regrid_clipped_fraction(0.25, bump_1_1))
    assert 0.0 < fraction <= 1.0
    with pytest.warns(RuntimeWarning):
        calculus.regrid_dilate(0.25, bump_1_1)


def test_regrid_rejects_bad_inputs(bump_1_1: GridFunction):
    """Nonpositive factors and spectra are rejected."""
    with pytest.raises(ValueError):
        calculus.regrid_dilate(0.0, bump_1_1)
    with pytest.raises(ValueError):
        calculus.regrid_dilate(2.0, calculus.fourier_y(bump_1_1))


def test_regrid_batches(spec_1_1: GridSpec):
    """Batch axes are regridded independently."""
    f = _small_bump(spec_1_1)
    batch = GridFunction(spec=spec_1_1, values=torch.stack([f.values, 2j * f.values]))
    g = calculus.regrid_dilate(0.5, batch)
    torch.testing.assert_close(g.values[1], 2j * g.values[0])
