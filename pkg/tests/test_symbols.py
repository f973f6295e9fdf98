import math

import hypothesis
import pytest
import torch
from hypothesis import strategies as st

from torchgrushin import calculus


@pytest.mark.parametrize("name", ["smooth", "hat"])
def test_bump_partition_of_unity(name: str):
    """Dyadic pieces sum to one away from zero and telescope into head and tail."""
    bump = calculus.make_bump(name)
    lam = torch.logspace(-9.0, 9.0, 1001, base=2.0, dtype=torch.float64)
    total = sum(bump.piece(j, lam) for j in range(-10, 11))
    torch.testing.assert_close(total, torch.ones_like(lam), atol=1e-12, rtol=0.0)
    torch.testing.assert_close(bump.window(-10, 10, lam), torch.ones_like(lam))
    torch.testing.assert_close(bump.head(3, lam) + bump.tail(3, lam), torch.ones_like(lam))


@pytest.mark.parametrize("name", ["smooth", "hat"])
def test_bump_support(name: str):
    """`chi` is even, supported in `1/2 < |lambda| < 2` and equal to one at 1."""
    bump = calculus.make_bump(name)
    lam = torch.tensor([0.0, 0.25, 0.5, 2.0, 3.0, 100.0], dtype=torch.float64)
    assert torch.all(bump(lam) == 0.0)
    assert float(bump(1.0)) == 1.0
    inside = torch.linspace(0.55, 1.95, 29, dtype=torch.float64)
    assert torch.all(bump(inside) > 0.0)
    torch.testing.assert_close(bump.piece(2, -inside), bump.piece(2, inside))

    # Tails vanish below the cut
    assert torch.all(bump.tail(3, torch.linspace(0.0, 8.0, 50)) == 0.0)


def test_make_bump_unknown():
    """Unknown bump identifiers are rejected."""
    with pytest.raises(ValueError):
        calculus.make_bump("square")


def test_bochner_riesz():
    """`(1 - t lambda^2)_+^delta` and its support."""
    F = calculus.bochner_riesz(1.0, 1.0)
    assert float(F(0.5).real) == pytest.approx(0.75)
    assert float(F(1.5).real) == 0.0
    assert F.support == (-1.0, 1.0)
    assert F.check_support(torch.linspace(-3.0, 3.0, 61))

    G = calculus.bochner_riesz(2.0, 4.0)
    assert G.support == (-0.5, 0.5)
    assert float(G(0.25).real) == pytest.approx(0.75 ** 2)

    sharp = calculus.bochner_riesz(0.0, 1.0)
    assert float(sharp(0.99).real) == 1.0
    assert float(sharp(1.0).real) == 0.0

    with pytest.raises(ValueError):
        calculus.bochner_riesz(-1.0, 1.0)
    with pytest.raises(ValueError):
        calculus.bochner_riesz(1.0, 0.0)


def test_simple_symbols():
    """Indicators, smooth bumps, Gaussians and cosines."""
    ind = calculus.indicator(0.25, 4.0)
    assert float(ind(4.0).real) == 1.0
    assert float(ind(4.01).real) == 0.0

    bump = calculus.smooth_bump(1.0, 3.0)
    assert float(bump(2.0).real) == pytest.approx(1.0)
    assert float(bump(1.0).real) == 0.0
    assert bump.sup_norm() == pytest.approx(1.0, abs=1e-6)

    g = calculus.gaussian(2.0)
    assert g.support == (-24.0, 24.0)
    assert float(g(2.0).real) == pytest.approx(math.exp(-0.5))

    cos = calculus.cosine_symbol(2.0)
    assert float(cos(math.pi / 4.0).real) == pytest.approx(0.0, abs=1e-15)

    with pytest.raises(ValueError):
        calculus.indicator(2.0, 1.0)
    with pytest.raises(ValueError):
        calculus.smooth_bump(1.0, 1.0)
    with pytest.raises(ValueError):
        calculus.gaussian(0.0)


def test_symbol_scaling_and_products():
    """Dilations shrink supports; products intersect them."""
    F = calculus.smooth_bump(1.0, 4.0)
    scaled = F.scaled(2.0)
    assert scaled.support == (0.5, 2.0)
    lam = torch.linspace(0.0, 5.0, 51, dtype=torch.float64)
    torch.testing.assert_close(scaled(lam), F(2.0 * lam))

    product = F * calculus.indicator(2.0, 8.0)
    assert product.support == (2.0, 4.0)
    torch.testing.assert_close(product(lam), F(lam) * calculus.indicator(2.0, 8.0)(lam))
    torch.testing.assert_close(F.conj()(lam), F(lam))
    with pytest.raises(ValueError):
        F.scaled(0.0)


def test_from_samples():
    """Tabulated symbols interpolate linearly and vanish outside the table."""
    F = calculus.from_samples(
        torch.tensor([0.0, 1.0, 2.0]),
        torch.tensor([0.0, 1.0 + 1.0j, 0.0]),
        name="tri",
    )
    assert F.name == "tri"
    assert F.support == (0.0, 2.0)
    values = F(torch.tensor([0.5, 1.5, 3.0], dtype=torch.float64))
    torch.testing.assert_close(
        values, torch.tensor([0.5 + 0.5j, 0.5 + 0.5j, 0.0], dtype=torch.complex128)
    )

    with pytest.raises(ValueError):
        calculus.from_samples(torch.tensor([0.0, 0.0]), torch.tensor([1.0, 2.0]))
    with pytest.raises(ValueError):
        calculus.from_samples(torch.tensor([0.0]), torch.tensor([1.0]))


def test_restriction_support_and_aliasing():
    """Support checks and alias warnings."""
    calculus.check_restriction_support(calculus.smooth_bump(0.25, 4.0))
    with pytest.raises(ValueError):
        calculus.check_restriction_support(calculus.gaussian())
    with pytest.warns(RuntimeWarning):
        assert calculus.warn_if_aliased(calculus.gaussian(), 16.0)
    assert not calculus.warn_if_aliased(calculus.gaussian(), 64.0)


def test_first_band():
    """Lowest band index that sees `[k] >= d1`."""
    assert [calculus.first_band(d1) for d1 in (1, 2, 3, 4, 7, 8)] == [0, 1, 1, 2, 2, 3]
    with pytest.raises(ValueError):
        calculus.first_band(0)


@hypothesis.given(
    d1=st.integers(min_value=1, max_value=4),
    iota=st.integers(min_value=0, max_value=6),
    r=st.floats(min_value=0.01, max_value=10.0),
)
def test_band_reconstruction(d1: int, iota: int, r: float):
    """Bands from the first one up to `iota` plus the tail rebuild `F` on the spectrum."""
    F = calculus.smooth_bump(0.25, 4.0)
    bump = calculus.SmoothDyadicBump()
    lam = (2.0 * torch.arange(40, dtype=torch.float64) + d1) * r
    start = calculus.first_band(d1)
    total = calculus.band_tail(F, iota, bump)(lam, r)
    for ell in range(start, iota + 1):
        total = total + calculus.band_truncate(F, ell, bump)(lam, r)
    expected = F(torch.sqrt(lam))
    torch.testing.assert_close(total, expected, atol=1e-12, rtol=0.0)


def test_band_symbols_vanish_at_zero_frequency():
    """Band symbols vanish on `r = 0`, and composition keeps the flag."""
    F = calculus.smooth_bump(0.25, 4.0)
    band = calculus.band_truncate(F, 1, calculus.HatDyadicBump())
    assert band.vanishes_at_zero
    assert torch.all(band(torch.linspace(0.0, 4.0, 9), 0.0) == 0.0)

    full = calculus.from_multiplier(F)
    assert not full.vanishes_at_zero
    assert full.lambda_sup == 16.0
    assert full.compose(band).vanishes_at_zero
    assert full.compose(band).lambda_sup == 16.0


def test_dyadic_localizer():
    """The localizer equals one on its plateau and vanishes outside its support."""
    psi = calculus.dyadic_localizer(calculus.SmoothDyadicBump(), width=2)
    plateau = torch.linspace(0.25, 4.0, 31, dtype=torch.float64)
    torch.testing.assert_close(psi(plateau).real, torch.ones_like(plateau))
    assert float(psi(8.5).real) == 0.0
    assert float(psi(0.1).real) == 0.0
