"""Private module; avoid importing from directly.
"""

import math
from typing import Callable, List, Optional, Sequence, Union

import torch

from .. import types
from ..calculus import (
    DyadicBump,
    GridFunction,
    GridSpec,
    JointSymbol,
    SmoothDyadicBump,
    Symbol1D,
    apply_multiplier,
    band_tail,
    band_truncate,
    check_restriction_support,
    sobolev_norm,
)
from ..geometry import ball_volume, homogeneous_dimension
from ._common import (
    ball_mask,
    check_exponent,
    conj_symbol,
    flag,
    joint_operator,
    log,
    progress,
    restriction_hypothesis_flags,
)
from ._norms import NormMethod, opnorm_p_to_2
from ._report import (
    ExperimentReport,
    ExperimentTolerances,
    Verdict,
    fit_exponent,
    upper_verdict,
    window_verdict,
)


def _restriction_sweep(
    experiment: str,
    F: Symbol1D,
    p: float,
    indices: Sequence[int],
    make_symbol: Callable[[int], JointSymbol],
    *,
    spec: GridSpec,
    index_name: str,
    trials: int,
    method: NormMethod,
    tolerances: ExperimentTolerances,
    seed: int,
    verbose: bool,
) -> ExperimentReport:
    check_restriction_support(F)
    check_exponent(p)
    flags: List[str] = []
    beyond_critical = restriction_hypothesis_flags(spec, p, flags)

    norms = []
    for index in progress(indices, experiment, verbose):
        G = make_symbol(index)
        estimate = opnorm_p_to_2(
            joint_operator(G),
            p,
            trials,
            spec=spec,
            adjoint=joint_operator(conj_symbol(G)),
            method=method,
            seed=seed,
        )
        norms.append(estimate.value)
        log(experiment, f"{index_name}={index} norm={estimate.value:.6e}", verbose)

    l2_norm = sobolev_norm(F, 0.0)
    fit = fit_exponent(indices, norms)
    predicted = -spec.d2 * (1.0 / p - 0.5)
    if beyond_critical:
        verdict = Verdict.INCONCLUSIVE
    elif p == 2.0:
        verdict = window_verdict(fit, 0.0, tolerances.anchor_tolerance, tolerances)
        sup = F.sup_norm()
        if max(norms, default=0.0) > sup * (1.0 + 1e-6):
            flag(flags, f"p = 2 norm exceeds sup |F| = {sup:.6e}")
    else:
        verdict = upper_verdict(fit, predicted, tolerances)

    return ExperimentReport(
        experiment=experiment,
        inputs={
            "symbol": F.name,
            "support": list(F.support),
            "p": p,
            index_name: list(indices),
            "trials": trials,
            "method": method,
            "grid": spec.to_dict(),
        },
        series={index_name: [float(i) for i in indices], "norm": norms},
        verdict=verdict,
        fit=fit,
        predicted=predicted,
        constants={
            "F_l2_norm": l2_norm,
            "fitted_constant": fit.constant / l2_norm if fit is not None and l2_norm > 0.0 else math.nan,
        },
        flags=tuple(flags),
        tolerances=tolerances,
    )


def restriction_decay(
    F: Symbol1D,
    p: float,
    ell_range: Sequence[int],
    *,
    spec: GridSpec,
    bump: DyadicBump = SmoothDyadicBump(),
    trials: int = 8,
    method: NormMethod = NormMethod.RANDOM_PROBE,
    tolerances: ExperimentTolerances = ExperimentTolerances(),
    seed: int = 0,
    verbose: bool = False,
) -> ExperimentReport:
    """Decay of `||G_ell(L, T)||_{p -> 2}` in the band index, against the predicted
    rate `2^{-ell d2 (1/p - 1/2)} ||F||_2`.

    Args:
        F (Symbol1D): Multiplier supported in `[1/8, 8]`.
        p (float): Exponent in `[1, 2]`.
        ell_range (Sequence[int]): Band indices.

    Keyword Args:
        spec (GridSpec): Grid.
        bump (DyadicBump, optional): Partition of unity.
        trials (int, optional): Probes per band.
        method (NormMethod, optional): Norm estimation strategy.
        tolerances (ExperimentTolerances, optional): Verdict tolerances.
        seed (int, optional): Probe seed.
        verbose (bool, optional): Print progress.

    Returns:
        ExperimentReport: Norm series over `ell` and the fitted slope. At `p = 2` the
        slope must stay within the anchor tolerance of zero.
    """
    return _restriction_sweep(
        "restriction_decay",
        F,
        p,
        list(ell_range),
        lambda ell: band_truncate(F, ell, bump),
        spec=spec,
        index_name="ell",
        trials=trials,
        method=method,
        tolerances=tolerances,
        seed=seed,
        verbose=verbose,
    )


def restriction_tail(
    F: Symbol1D,
    p: float,
    iota_range: Sequence[int],
    *,
    spec: GridSpec,
    bump: DyadicBump = SmoothDyadicBump(),
    trials: int = 8,
    method: NormMethod = NormMethod.RANDOM_PROBE,
    tolerances: ExperimentTolerances = ExperimentTolerances(),
    seed: int = 0,
    verbose: bool = False,
) -> ExperimentReport:
    """Decay of `||sum_{ell > iota} G_ell(L, T)||_{p -> 2}` in `iota`, against
    `2^{-iota d2 (1/p - 1/2)} ||F||_2`. Arguments as in `restriction_decay()`."""
    return _restriction_sweep(
        "restriction_tail",
        F,
        p,
        list(iota_range),
        lambda iota: band_tail(F, iota, bump),
        spec=spec,
        index_name="iota",
        trials=trials,
        method=method,
        tolerances=tolerances,
        seed=seed,
        verbose=verbose,
    )


def _localized_operator(F: Symbol1D, mask: torch.Tensor):
    """`F(sqrt(L)) chi_B` and its adjoint `chi_B conj(F)(sqrt(L))`."""
    mask_values = mask.to(torch.complex128)
    conj_F = F.conj()

    def apply(f: GridFunction) -> GridFunction:
        return apply_multiplier(F, f.with_values(f.values * mask_values))

    def adjoint(g: GridFunction) -> GridFunction:
        out = apply_multiplier(conj_F, g)
        return out.with_values(out.values * mask_values)

    return apply, adjoint


def away_from_origin_gain(
    F: Symbol1D,
    p: float,
    a_list: Sequence[Sequence[float]],
    *,
    spec: GridSpec,
    radius_factor: float = 0.125,
    radii: Optional[Sequence[float]] = None,
    trials: int = 8,
    method: NormMethod = NormMethod.RANDOM_PROBE,
    tolerances: ExperimentTolerances = ExperimentTolerances(),
    seed: int = 0,
    verbose: bool = False,
) -> ExperimentReport:
    """Gain `||F(sqrt(L)) chi_{B_R(a, 0)}||_{p -> 2} <~ |a|^{-d2 (1/p - 1/2)} ||F||_2`
    for balls far from the first layer origin.

    Args:
        F (Symbol1D): Multiplier supported in `[1/8, 8]`.
        p (float): Exponent in `[1, 2]`.
        a_list (Sequence[Sequence[float]]): First layer centers with growing `|a|`.

    Keyword Args:
        spec (GridSpec): Grid.
        radius_factor (float, optional): `R = radius_factor |a|` when `radii` is None.
        radii (Sequence[float], optional): Explicit radii, one per center.
        trials (int, optional): Probes per center.
        method (NormMethod, optional): Norm estimation strategy.
        tolerances (ExperimentTolerances, optional): Verdict tolerances.
        seed (int, optional): Probe seed.
        verbose (bool, optional): Print progress.

    Returns:
        ExperimentReport: Norm series over `log2 |a|` and the fitted exponent.
    """
    check_restriction_support(F)
    check_exponent(p)
    centers = [torch.as_tensor(a, dtype=torch.float64).reshape(-1) for a in a_list]
    if any(a.shape != (spec.d1,) for a in centers):
        raise ValueError(f"Centers must have {spec.d1} coordinates.")
    magnitudes = [float(torch.linalg.norm(a)) for a in centers]
    if radii is None:
        radii = [radius_factor * m for m in magnitudes]
    if len(radii) != len(centers):
        raise ValueError("Need one radius per center.")
    for R, m in zip(radii, magnitudes):
        if not 0.0 < R < m / 4.0:
            raise ValueError(f"Need 0 < R < |a| / 4, got R={R} and |a|={m}.")

    flags: List[str] = []
    beyond_critical = restriction_hypothesis_flags(spec, p, flags)
    norms = []
    for a, R in progress(list(zip(centers, radii)), "away_from_origin_gain", verbose):
        ball = types.Ball(
            center=types.CCPoint(x=a, y=torch.zeros(spec.d2, dtype=torch.float64)),
            radius=R,
        )
        mask = ball_mask(spec, ball)
        apply, adjoint = _localized_operator(F, mask)
        estimate = opnorm_p_to_2(
            apply, p, trials, spec=spec, adjoint=adjoint, method=method, mask=mask, seed=seed
        )
        norms.append(estimate.value)
        log(
            "away_from_origin_gain",
            f"|a|={float(torch.linalg.norm(a)):g} R={R:g} norm={estimate.value:.6e}",
            verbose,
        )

    log_a = [math.log2(m) for m in magnitudes]
    fit = fit_exponent(log_a, norms)
    predicted = -spec.d2 * (1.0 / p - 0.5)
    if beyond_critical:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = upper_verdict(fit, predicted, tolerances)
    if p == 2.0:
        sup = F.sup_norm()
        if max(norms, default=0.0) > sup * (1.0 + 1e-6):
            flag(flags, f"p = 2 norm exceeds sup |F| = {sup:.6e}")

    return ExperimentReport(
        experiment="away_from_origin_gain",
        inputs={
            "symbol": F.name,
            "support": list(F.support),
            "p": p,
            "centers": [a.tolist() for a in centers],
            "radii": list(radii),
            "trials": trials,
            "method": method,
            "grid": spec.to_dict(),
        },
        series={"log2_a": log_a, "radius": list(radii), "norm": norms},
        verdict=verdict,
        fit=fit,
        predicted=predicted,
        constants={"F_l2_norm": sobolev_norm(F, 0.0)},
        flags=tuple(flags),
        tolerances=tolerances,
    )


def stein_tomas_condition(
    F: Symbol1D,
    t: Union[float, Sequence[float]],
    ball: types.Ball,
    p0: float,
    *,
    spec: GridSpec,
    trials: int = 8,
    method: NormMethod = NormMethod.RANDOM_PROBE,
    tolerances: ExperimentTolerances = ExperimentTolerances(),
    seed: int = 0,
    verbose: bool = False,
) -> ExperimentReport:
    """Compare `||F(t sqrt(L)) chi_B||_{p0 -> 2}` against the restriction-type
    condition `((R / t)^Q / |B_R|)^{1/p0 - 1/2} ||F||_inf`.

    With at least `min_points` scales, the fitted exponent of the left-hand side in
    `t` must not fall below that of the right-hand side by more than the allowance.
    With fewer scales, `p0 = 2` passes when the ratio stays below `1 + tol`; other
    exponents are inconclusive.

    Args:
        F (Symbol1D): Multiplier supported in `[0, 1]`.
        t (float or Sequence[float]): Scale(s), each `< R`.
        ball (Ball): Ball `B_R(a, b)`.
        p0 (float): Exponent in `[1, 2]`.

    Keyword Args:
        spec (GridSpec): Grid.
        trials (int, optional): Probes per scale.
        method (NormMethod, optional): Norm estimation strategy.
        tolerances (ExperimentTolerances, optional): Verdict tolerances.
        seed (int, optional): Probe seed.
        verbose (bool, optional): Print progress.

    Returns:
        ExperimentReport: Left- and right-hand sides per scale.
    """
    check_exponent(p0)
    if F.support[0] < 0.0 or F.support[1] > 1.0:
        raise ValueError(f"Symbol {F.name} must be supported in [0, 1], got {F.support}.")
    scales = [float(t)] if isinstance(t, (int, float)) else [float(s) for s in t]
    R = ball.radius
    for s in scales:
        if not 0.0 < s < R:
            raise ValueError(f"Need 0 < t < R, got t={s} and R={R}.")

    flags: List[str] = []
    Q = homogeneous_dimension(spec.d1, spec.d2)
    volume = ball_volume(R, ball.a, spec.d2)
    sup = F.sup_norm()
    mask = ball_mask(spec, ball)

    lhs, rhs = [], []
    for s in progress(scales, "stein_tomas_condition", verbose):
        apply, adjoint = _localized_operator(F.scaled(s), mask)
        estimate = opnorm_p_to_2(
            apply, p0, trials, spec=spec, adjoint=adjoint, method=method, mask=mask, seed=seed
        )
        lhs.append(estimate.value)
        rhs.append(((R / s) ** Q / volume) ** (1.0 / p0 - 0.5) * sup)
        log("stein_tomas_condition", f"t={s:g} lhs={lhs[-1]:.6e} rhs={rhs[-1]:.6e}", verbose)

    ratios = [l / r if r > 0.0 else math.inf for l, r in zip(lhs, rhs)]
    log_t = [math.log2(s) for s in scales]
    fit = fit_exponent(log_t, lhs)
    rhs_fit = fit_exponent(log_t, rhs)
    predicted = rhs_fit.slope if rhs_fit is not None else None

    if len(scales) >= tolerances.min_points and fit is not None and predicted is not None:
        lower = predicted - tolerances.allowance(predicted)
        verdict = Verdict.PASS if fit.slope >= lower else Verdict.FAIL
    elif p0 == 2.0:
        verdict = (
            Verdict.PASS
            if max(ratios) <= 1.0 + tolerances.exponent_floor
            else Verdict.FAIL
        )
    else:
        verdict = Verdict.INCONCLUSIVE

    return ExperimentReport(
        experiment="stein_tomas_condition",
        inputs={
            "symbol": F.name,
            "t": scales,
            "ball": {"a": ball.a.tolist(), "b": ball.b.tolist(), "R": R},
            "p0": p0,
            "trials": trials,
            "method": method,
            "grid": spec.to_dict(),
        },
        series={"log2_t": log_t, "lhs": lhs, "rhs": rhs, "ratio": ratios},
        verdict=verdict,
        fit=fit,
        predicted=predicted,
        constants={"fitted_constant": max(ratios), "ball_volume": volume, "F_sup": sup},
        flags=tuple(flags),
        tolerances=tolerances,
    )
