import pytest
import torch
from _grushin_fixtures import spec_1_1

from torchgrushin import estimates
from torchgrushin.calculus import GridFunction, GridSpec
from torchgrushin.estimates import NormMethod

_TINY = GridSpec(d1=1, d2=1, x_extent=1.0, y_extent=1.0, n_x=4, n_y=4, k_max=0)


def _multiplier(values: torch.Tensor):
    def apply(f: GridFunction) -> GridFunction:
        return GridFunction(spec=f.spec, values=f.values * values)

    return apply


def test_zero_and_identity(spec_1_1: GridSpec):
    """The zero operator has norm 0; the identity has `L^2` norm 1."""
    zero = estimates.opnorm_p_to_2(lambda f: f * 0.0, 2.0, 4, spec=spec_1_1)
    assert zero.value == 0.0

    identity = estimates.opnorm_p_to_2(lambda f: f, 2.0, 4, spec=spec_1_1)
    assert identity.value == pytest.approx(1.0, rel=1e-12)
    assert identity.trials == 4
    assert identity.method is NormMethod.RANDOM_PROBE
    assert identity.columns == 32 * 32


def test_exhaustive_identity():
    """From `L^1` to `L^2` the identity is bounded by the unit-mass delta, `|cell|^{-1/2}`."""
    estimate = estimates.opnorm_p_to_2(
        lambda f: f, 1.0, 1, spec=_TINY, method=NormMethod.EXHAUSTIVE_SMALL
    )
    assert _TINY.cell_volume == 0.25
    assert estimate.value == pytest.approx(2.0, rel=1e-12)
    assert estimate.columns == 16


def test_power_iteration_finds_peak():
    """Power iteration on `T* T` converges to the largest multiplier value."""
    values = torch.ones(_TINY.shape, dtype=torch.float64)
    values[1, 2] = 3.0
    estimate = estimates.opnorm_p_to_2(
        _multiplier(values),
        2.0,
        2,
        spec=_TINY,
        method=NormMethod.POWER_ITERATION_ON_DUAL,
    )
    assert 3.0 * (1.0 - 1e-6) <= estimate.value <= 3.0 * (1.0 + 1e-12)


def test_monotone_in_trials(spec_1_1: GridSpec):
    """Probe sets are nested, so more trials never lower the estimate."""
    points = spec_1_1.points
    values = torch.exp(-torch.sum(points.x ** 2, dim=-1) - 0.1 * torch.sum(points.y ** 2, dim=-1))
    apply = _multiplier(values)
    smaller = estimates.opnorm_p_to_2(apply, 1.5, 3, spec=spec_1_1)
    larger = estimates.opnorm_p_to_2(apply, 1.5, 6, spec=spec_1_1)
    assert larger.value >= smaller.value * (1.0 - 1e-12)


def test_norm_errors(spec_1_1: GridSpec):
    """Exponents, trial counts and exhaustive sizes are validated."""
    with pytest.raises(ValueError):
        estimates.opnorm_p_to_2(lambda f: f, 3.0, 1, spec=spec_1_1)
    with pytest.raises(ValueError):
        estimates.opnorm_p_to_2(lambda f: f, 2.0, 0, spec=spec_1_1)

    large = GridSpec(d1=1, d2=1, x_extent=8.0, y_extent=16.0, n_x=128, n_y=64, k_max=0)
    with pytest.raises(ValueError):
        estimates.opnorm_p_to_2(
            lambda f: f, 1.0, 1, spec=large, method=NormMethod.EXHAUSTIVE_SMALL
        )
    with pytest.raises(ValueError):
        estimates.NormEstimate(value=-1.0, trials=1, method=NormMethod.RANDOM_PROBE, columns=1)


def test_structured_probe(spec_1_1: GridSpec):
    """Probes are reproducible and confined to the probed set."""
    mask = torch.abs(spec_1_1.points.x[..., 0]) <= 2.0
    for index in range(3):
        first = estimates.structured_probe(spec_1_1, index, seed=7, mask=mask)
        second = estimates.structured_probe(spec_1_1, index, seed=7, mask=mask)
        assert torch.equal(first, second)
        assert first.shape == spec_1_1.shape
        assert torch.all(first[~mask] == 0.0)
        assert bool(torch.any(first[mask] != 0.0))
