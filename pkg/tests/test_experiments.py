import math
import warnings

import pytest
import torch
from _grushin_fixtures import bump_1_1, origin, spec_1_1

from torchgrushin import calculus, estimates, hermite, types
from torchgrushin.calculus import GridFunction, GridSpec
from torchgrushin.estimates import Verdict


def test_restriction_decay_beyond_critical(spec_1_1: GridSpec):
    """Exponents above the critical one are flagged and get no verdict."""
    F = calculus.smooth_bump(0.25, 4.0)
    with pytest.warns(RuntimeWarning):
        report = estimates.restriction_decay(F, 1.0, [0, 1], spec=spec_1_1, trials=2)
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.series["ell"] == [0.0, 1.0]
    assert all(value > 0.0 for value in report.series["norm"])
    assert any("critical exponent" in message for message in report.flags)
    assert report.constants["F_l2_norm"] > 0.0


def test_restriction_errors(spec_1_1: GridSpec):
    """Symbols outside `[1/8, 8]`, bad exponents and bad centers are rejected."""
    with pytest.raises(ValueError):
        estimates.restriction_decay(calculus.gaussian(), 1.0, [0], spec=spec_1_1)
    with pytest.raises(ValueError):
        estimates.restriction_tail(calculus.indicator(0.05, 2.0), 1.0, [0], spec=spec_1_1)
    F = calculus.smooth_bump(0.25, 4.0)
    with pytest.raises(ValueError):
        estimates.restriction_decay(F, 3.0, [0], spec=spec_1_1)

    # R must stay below |a| / 4
    with pytest.raises(ValueError):
        estimates.away_from_origin_gain(F, 1.0, [[2.0]], spec=spec_1_1, radii=[1.0])
    with pytest.raises(ValueError):
        estimates.away_from_origin_gain(F, 1.0, [[1.0, 2.0]], spec=spec_1_1)
    with pytest.raises(ValueError):
        estimates.away_from_origin_gain(F, 1.0, [[4.0], [6.0]], spec=spec_1_1, radii=[0.5])


def test_stein_tomas_at_two(spec_1_1: GridSpec):
    """At `p0 = 2` the localized norm never exceeds `sup |F|`."""
    F = calculus.smooth_bump(0.25, 1.0)
    ball = types.Ball(center=origin(spec_1_1), radius=2.0)
    report = estimates.stein_tomas_condition(F, [0.5], ball, 2.0, spec=spec_1_1, trials=2)
    assert report.verdict is Verdict.PASS
    assert report.constants["F_sup"] == pytest.approx(1.0, abs=1e-6)
    assert report.series["lhs"][0] <= 1.0 + 1e-9
    assert report.series["rhs"][0] == pytest.approx(report.constants["F_sup"])

    single = estimates.stein_tomas_condition(F, 0.5, ball, 1.5, spec=spec_1_1, trials=2)
    assert single.verdict is Verdict.INCONCLUSIVE


def test_stein_tomas_errors(spec_1_1: GridSpec):
    """Supports outside `[0, 1]` and scales outside `(0, R)` are rejected."""
    ball = types.Ball(center=origin(spec_1_1), radius=2.0)
    with pytest.raises(ValueError):
        estimates.stein_tomas_condition(calculus.smooth_bump(0.25, 4.0), 0.5, ball, 2.0, spec=spec_1_1)
    with pytest.raises(ValueError):
        estimates.stein_tomas_condition(calculus.smooth_bump(-0.5, 1.0), 0.5, ball, 2.0, spec=spec_1_1)
    with pytest.raises(ValueError):
        estimates.stein_tomas_condition(calculus.smooth_bump(0.25, 1.0), 2.0, ball, 2.0, spec=spec_1_1)
    with pytest.raises(ValueError):
        estimates.stein_tomas_condition(calculus.smooth_bump(0.25, 1.0), 0.0, ball, 2.0, spec=spec_1_1)


def test_weighted_plancherel_unweighted(spec_1_1: GridSpec):
    """Without weight, kernel integrals match the spectral side of Plancherel."""
    H = calculus.smooth_bump(0.25, 4.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        report = estimates.weighted_plancherel(H, [0, 1], 0, origin(spec_1_1), spec=spec_1_1)
    assert report.constants["max_plancherel_deviation"] <= 1e-6
    assert all(value > 0.0 for value in report.series["integral"])
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.predicted == -1.0

    with pytest.raises(ValueError):
        estimates.weighted_plancherel(H, [0], -1, origin(spec_1_1), spec=spec_1_1)


def test_hermite_bound_scan():
    """The ground state matches its closed form, and even indices peak at least at
    `1 / pi` in two dimensions."""
    plan = hermite.default_plan(2, 8)
    report = estimates.hermite_bound_scan([0, 2, 4, 8], [1.0], plan.points)
    assert report.constants["closed_form_deviation"] <= 1e-10
    assert report.verdict is not Verdict.INCONCLUSIVE
    assert report.predicted == 0.0
    for sup in report.series["normalized_sup"]:
        assert sup >= (1.0 - 1e-9) / math.pi
    assert report.series["normalized_sup"][0] == pytest.approx(1.0 / math.pi, rel=1e-9)
    assert report.constants["decay_rate"] > 0.0

    with pytest.raises(ValueError):
        estimates.hermite_bound_scan([0], [1.0], torch.zeros((4, 1), dtype=torch.float64))
    with pytest.raises(ValueError):
        estimates.hermite_bound_scan([0], [1.0], torch.zeros((0, 2), dtype=torch.float64))


def test_discrete_restriction_endpoints():
    """`p = 1` gives the square root of the largest diagonal value, `p = 2` gives one."""
    plan = hermite.default_plan(2, 2)
    report = estimates.discrete_restriction_scan([0], [1.0, 2.0], 1.0, plan)
    assert report.series["norm"][0] == pytest.approx(math.pi ** -0.5, rel=1e-9)
    assert report.series["norm"][1] == pytest.approx((2.0 / math.pi) ** 0.5, rel=1e-9)
    # The r^{1/2} gain makes the normalized values agree
    assert report.series["normalized"][1] == pytest.approx(report.series["normalized"][0], rel=1e-9)

    two = estimates.discrete_restriction_scan([0, 1, 2], [1.0], 2.0, plan)
    assert two.series["norm"] == [1.0, 1.0, 1.0]

    with pytest.raises(ValueError):
        estimates.discrete_restriction_scan([3], [1.0], 1.0, plan)


def test_discrete_restriction_interpolated():
    """Between the endpoints, estimates obey the interpolation bound and carry no verdict
    above `2 d1 / (d1 + 2)`."""
    plan = hermite.default_plan(2, 2)
    with pytest.warns(RuntimeWarning):
        report = estimates.discrete_restriction_scan([0, 2], [1.0], 1.5, plan)
    assert report.verdict is Verdict.INCONCLUSIVE
    for k, norm in zip([0, 2], report.series["norm"]):
        diagonal = hermite.diag_kernel(types.EigenIndex(k=k, d1=2), 1.0, plan.points)
        assert 0.0 < norm <= float(torch.max(diagonal)) ** (1.0 / 6.0) * (1.0 + 1e-6)


def test_propagation_at_zero(bump_1_1: GridFunction):
    """Nothing leaks at `t = 0`."""
    report = estimates.propagation_leakage(0.0, bump_1_1, margins=(0.5, 1.0))
    assert report.series["leakage"] == [0.0, 0.0]
    assert report.verdict is Verdict.PASS
    assert report.constants["f_l2_norm"] == pytest.approx(float(bump_1_1.norm()))


def test_propagation_margins(bump_1_1: GridFunction):
    """Wider margins see less leakage."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        report = estimates.propagation_leakage(0.5, bump_1_1, margins=(0.25, 0.5, 1.0))
    leakage = report.series["leakage"]
    assert all(a >= b for a, b in zip(leakage[:-1], leakage[1:]))
    assert all(value >= 0.0 for value in leakage)


def test_propagation_errors(bump_1_1: GridFunction, spec_1_1: GridSpec):
    """Spectra, batches, bad margins and the zero function are rejected."""
    with pytest.raises(ValueError):
        estimates.propagation_leakage(1.0, calculus.fourier_y(bump_1_1))
    batch = GridFunction(spec=spec_1_1, values=torch.stack([bump_1_1.values] * 2))
    with pytest.raises(ValueError):
        estimates.propagation_leakage(1.0, batch)
    with pytest.raises(ValueError):
        estimates.propagation_leakage(1.0, bump_1_1, margins=(0.0,))
    with pytest.raises(ValueError):
        estimates.propagation_leakage(1.0, GridFunction.zeros(spec_1_1))


def test_riesz_uniformity(bump_1_1: GridFunction):
    """`t = 0` is the identity; in `L^2` the means are contractions."""
    only_zero = estimates.riesz_uniformity(1.0, 2.0, [0.0], [bump_1_1])
    assert only_zero.series["ratio"] == [1.0]
    assert only_zero.verdict is Verdict.INCONCLUSIVE
    assert only_zero.constants["max_spread"] == 0.0

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        report = estimates.riesz_uniformity(1.0, 2.0, [0.0, 0.5, 1.0], [bump_1_1])
    assert report.series["t"] == [0.0, 0.5, 1.0]
    assert report.verdict is not Verdict.INCONCLUSIVE
    for ratio in report.series["ratio"][1:]:
        assert 0.0 < ratio <= 1.0 + 1e-9


def test_riesz_uniformity_errors(bump_1_1: GridFunction):
    """Bad exponents, scales and corpora are rejected."""
    with pytest.raises(ValueError):
        estimates.riesz_uniformity(1.0, 0.5, [1.0], [bump_1_1])
    with pytest.raises(ValueError):
        estimates.riesz_uniformity(1.0, 2.0, [-1.0], [bump_1_1])
    with pytest.raises(ValueError):
        estimates.riesz_uniformity(1.0, 2.0, [], [bump_1_1])
    with pytest.raises(ValueError):
        estimates.riesz_uniformity(1.0, 2.0, [1.0], [])
