"""Private module; avoid importing from directly.
"""

import math
from typing import List, Optional, Sequence

import fannypack
import numpy as np
import torch

from .. import hermite, types
from ..calculus import (
    DyadicBump,
    GridSpec,
    SmoothDyadicBump,
    Symbol1D,
    band_truncate,
    check_restriction_support,
    grid_delta,
    integral_kernel,
    plancherel_spectral_sum,
    sobolev_norm,
)
from ._common import boundary_shell, check_exponent, flag, log, progress
from ._report import (
    ExperimentReport,
    ExperimentTolerances,
    Verdict,
    fit_exponent,
    upper_verdict,
    window_verdict,
)


def weighted_plancherel(
    H: Symbol1D,
    ell_list: Sequence[int],
    N: int,
    center: types.CCPoint,
    *,
    spec: GridSpec,
    bump: DyadicBump = SmoothDyadicBump(),
    k_max: Optional[int] = None,
    tolerances: ExperimentTolerances = ExperimentTolerances(),
    verbose: bool = False,
) -> ExperimentReport:
    """Weighted Plancherel integral `int |y - b|^{2N} |K_{H_ell(L, T)}((x, y), (a, b))|^2`
    of band-truncated kernels, against the predicted growth `2^{ell (2N - d2)}`.

    Kernel columns are obtained by applying `H_ell(L, T)` to a grid delta at `(a, b)`.
    At `N = 0` the integral is cross-checked against the spectral side of the
    Plancherel identity.

    Args:
        H (Symbol1D): Multiplier supported in `[1/8, 8]`.
        ell_list (Sequence[int]): Band indices.
        N (int): Weight order, `N >= 0`.
        center (CCPoint): Kernel pole `(a, b)`.

    Keyword Args:
        spec (GridSpec): Grid.
        bump (DyadicBump, optional): Partition of unity.
        k_max (int, optional): Overrides `spec.k_max`.
        tolerances (ExperimentTolerances, optional): Verdict tolerances.
        verbose (bool, optional): Print progress.

    Returns:
        ExperimentReport: Weighted integrals over `ell`, two-sided exponent verdict.
    """
    check_restriction_support(H)
    if N < 0:
        raise ValueError(f"Weight order must be nonnegative, got {N}.")
    ell_list = list(ell_list)
    flags: List[str] = []

    index = spec.nearest_index(center)
    b = spec.y_axis[list(index[spec.d1 :])]
    weight = torch.sum((spec.points.y - b) ** 2, dim=-1) ** N
    shell = boundary_shell(spec)

    integrals = []
    deviations = []
    shell_fractions = []
    for ell in progress(ell_list, "weighted_plancherel", verbose):
        G = band_truncate(H, ell, bump)
        kernel = integral_kernel(G, center, spec, k_max=k_max)
        density = weight * torch.abs(kernel.values) ** 2
        integral = float(spec.cell_volume * torch.sum(density))
        integrals.append(integral)

        shell_fraction = float(torch.sum(density[shell])) / integral if integral > 0.0 else 0.0
        shell_fractions.append(shell_fraction)
        if shell_fraction > 0.01:
            flag(
                flags,
                f"ell={ell}: {shell_fraction:.2%} of the weighted integral sits at the"
                " grid boundary; the extent truncates the kernel",
            )

        if N == 0:
            spectral = float(
                plancherel_spectral_sum(G, grid_delta(spec, center), k_max=k_max)
            )
            deviation = abs(spectral - integral) / max(integral, 1e-300)
            deviations.append(deviation)
            if deviation > 1e-6:
                flag(
                    flags,
                    f"ell={ell}: kernel integral and spectral sum differ by {deviation:.2e}",
                )
        log("weighted_plancherel", f"ell={ell} integral={integral:.6e}", verbose)

    predicted = float(2 * N - spec.d2)
    fit = fit_exponent(ell_list, integrals)
    verdict = window_verdict(fit, predicted, tolerances.two_sided_tolerance, tolerances)
    if any(d > 1e-6 for d in deviations):
        verdict = Verdict.FAIL

    sobolev_squared = sobolev_norm(H, float(N)) ** 2
    constants = {
        "H_sobolev_squared": sobolev_squared,
        "max_shell_fraction": max(shell_fractions, default=0.0),
    }
    if fit is not None and sobolev_squared > 0.0:
        constants["fitted_constant"] = fit.constant / sobolev_squared
    if deviations:
        constants["max_plancherel_deviation"] = max(deviations)

    return ExperimentReport(
        experiment="weighted_plancherel",
        inputs={
            "symbol": H.name,
            "support": list(H.support),
            "ell": ell_list,
            "N": N,
            "center": {
                "a": torch.as_tensor(center.x).tolist(),
                "b": torch.as_tensor(center.y).tolist(),
            },
            "grid": spec.to_dict(),
        },
        series={"ell": [float(ell) for ell in ell_list], "integral": integrals},
        verdict=verdict,
        fit=fit,
        predicted=predicted,
        constants=constants,
        flags=tuple(flags),
        tolerances=tolerances,
    )


def hermite_bound_scan(
    k_list: Sequence[int],
    r_list: Sequence[float],
    x_grid: types.XPointsTorch,
    *,
    tolerances: ExperimentTolerances = ExperimentTolerances(),
    verbose: bool = False,
) -> ExperimentReport:
    """Pointwise bounds for `H_k^eta(x) = K_k^eta(x, x)`: the flat bound
    `C r^{d1/2} [k]^{d1/2 - 1}` everywhere, and the Gaussian bound
    `C r^{d1/2} exp(-c r |x|_inf^2)` once `r |x|_inf^2 >= 2 [k]`.

    Args:
        k_list (Sequence[int]): Eigenvalue indices.
        r_list (Sequence[float]): Frequency magnitudes.
        x_grid (torch.Tensor): Sample points, shape `(..., d1)` with `d1 >= 2`.

    Keyword Args:
        tolerances (ExperimentTolerances, optional): Verdict tolerances.
        verbose (bool, optional): Print progress.

    Returns:
        ExperimentReport: Normalized suprema over `[k]`, fitted constants of both
        regimes, and the deviation of the ground state from its closed form.
    """
    x = torch.as_tensor(x_grid, dtype=torch.float64)
    d1 = x.shape[-1]
    if d1 < 2:
        raise ValueError(f"Hermite bounds need d1 >= 2, got {d1}.")
    x = x.reshape(-1, d1)
    if x.shape[0] == 0:
        raise ValueError("Sample grid is empty.")
    k_list = list(k_list)
    r_list = [float(r) for r in r_list]
    flags: List[str] = []

    # Ground state oracle: H_0(x) = r^{d1/2} pi^{-d1/2} exp(-r |x|^2)
    closed_form_deviation = 0.0
    for r in r_list:
        closed = (r / math.pi) ** (d1 / 2.0) * torch.exp(-r * torch.sum(x ** 2, dim=-1))
        evaluated = hermite.diag_kernel(types.EigenIndex(k=0, d1=d1), r, x)
        closed_form_deviation = max(
            closed_form_deviation, float(torch.max(torch.abs(evaluated - closed)))
        )

    sup_infinity = torch.amax(torch.abs(x), dim=-1)
    log_brackets, normalized_sups, flat_ratios = [], [], []
    decay_rates, decay_constants = [], []
    pairs = [(k, r) for k in k_list for r in r_list]
    for k, r in progress(pairs, "hermite_bound_scan", verbose):
        index = types.EigenIndex(k=k, d1=d1)
        values = hermite.diag_kernel(index, r, x)
        normalized = values / r ** (d1 / 2.0)
        sup = float(torch.max(normalized))
        log_brackets.append(math.log2(index.bracket))
        normalized_sups.append(sup)
        flat_ratios.append(sup / index.bracket ** (d1 / 2.0 - 1.0))

        s = r * sup_infinity ** 2
        regime = (s >= 2.0 * index.bracket) & (normalized > 1e-300)
        if int(torch.count_nonzero(regime)) >= 2:
            slope, _ = np.polyfit(
                fannypack.utils.to_numpy(s[regime]),
                np.log(fannypack.utils.to_numpy(normalized[regime])),
                1,
            )
            rate = -float(slope)
            decay_rates.append(rate)
            # Smallest C with the fitted rate dominating every sample in the regime
            envelope = normalized[regime] * torch.exp(rate * s[regime])
            decay_constants.append(float(torch.max(envelope)))
        log("hermite_bound_scan", f"k={k} r={r:g} sup={sup:.6e}", verbose)

    predicted = d1 / 2.0 - 1.0
    fit = fit_exponent(log_brackets, normalized_sups)
    verdict = window_verdict(fit, predicted, tolerances.hermite_tolerance, tolerances)
    if decay_rates and min(decay_rates) <= 0.0:
        flag(flags, "Gaussian regime fit has a nonpositive decay rate")
        verdict = Verdict.FAIL
    if closed_form_deviation > 1e-10:
        flag(flags, f"ground state deviates from its closed form by {closed_form_deviation:.2e}")
        verdict = Verdict.FAIL

    constants = {
        "flat_constant": max(flat_ratios, default=math.nan),
        "flat_constant_spread": max(flat_ratios) / min(flat_ratios)
        if flat_ratios and min(flat_ratios) > 0.0
        else math.nan,
        "closed_form_deviation": closed_form_deviation,
    }
    if decay_rates:
        constants["decay_rate"] = min(decay_rates)
        constants["decay_constant"] = max(decay_constants)

    return ExperimentReport(
        experiment="hermite_bound_scan",
        inputs={"k": k_list, "r": r_list, "d1": d1, "samples": int(x.shape[0])},
        series={
            "log2_bracket": log_brackets,
            "normalized_sup": normalized_sups,
            "flat_ratio": flat_ratios,
        },
        verdict=verdict,
        fit=fit,
        predicted=predicted,
        constants=constants,
        flags=tuple(flags),
        tolerances=tolerances,
    )


def _projection_norm(
    index: types.EigenIndex,
    r: float,
    p: float,
    plan: hermite.HermiteEvalPlan,
    iterations: int,
) -> float:
    """`||P_k^eta||_{p -> 2}` on the plan grid. Exact for `p = 1`, where the supremum
    is attained by a delta at the largest `H_k^eta`, and `p = 2`; a dual-map ascent
    started from that delta otherwise."""
    points = plan.points
    diagonal = hermite.diag_kernel(index, r, points)
    if p == 1.0:
        return math.sqrt(float(torch.max(diagonal)))
    if p == 2.0:
        return 1.0

    def lp(values: torch.Tensor, exponent: float) -> float:
        return float(
            (plan.cell_volume * torch.sum(torch.abs(values) ** exponent)) ** (1.0 / exponent)
        )

    f = torch.zeros_like(diagonal)
    peak = np.unravel_index(int(torch.argmax(diagonal)), tuple(diagonal.shape))
    f[tuple(int(i) for i in peak)] = 1.0 / plan.cell_volume
    g = hermite.project(index, r, f, plan)
    best = lp(g, 2.0) / lp(f, p)
    dual_exponent = p / (p - 1.0)
    for _ in range(iterations):
        scale = float(torch.max(torch.abs(g)))
        if scale == 0.0:
            break
        f = torch.sign(g) * (torch.abs(g) / scale) ** (dual_exponent - 1.0)
        g = hermite.project(index, r, f, plan)
        best = max(best, lp(g, 2.0) / lp(f, p))
    return best


def discrete_restriction_scan(
    k_list: Sequence[int],
    r_list: Sequence[float],
    p: float,
    plan: hermite.HermiteEvalPlan,
    *,
    iterations: int = 24,
    tolerances: ExperimentTolerances = ExperimentTolerances(),
    verbose: bool = False,
) -> ExperimentReport:
    """Restriction bound for single eigenspaces,
    `||P_k^eta||_{p -> 2} <= C r^{(d1/2)(1/p - 1/2)} [k]^{(d1/2)(1/p - 1/2) - 1/2}`.

    Args:
        k_list (Sequence[int]): Eigenvalue indices, each at most `plan.k_max`.
        r_list (Sequence[float]): Frequency magnitudes.
        p (float): Exponent in `[1, 2]`.
        plan (HermiteEvalPlan): Sampling plan; must resolve the largest `(k, r)`.

    Keyword Args:
        iterations (int, optional): Ascent steps for `1 < p < 2`.
        tolerances (ExperimentTolerances, optional): Verdict tolerances.
        verbose (bool, optional): Print progress.

    Returns:
        ExperimentReport: Norms normalized by the `r` factor over `log2 [k]`, with the
        fitted constant `C` and its spread across the sweep.
    """
    check_exponent(p)
    k_list = list(k_list)
    r_list = [float(r) for r in r_list]
    if any(k > plan.k_max for k in k_list):
        raise ValueError(f"Plan retains k <= {plan.k_max}, got {max(k_list)}.")

    flags: List[str] = []
    gain = (plan.d1 / 2.0) * (1.0 / p - 0.5)
    predicted = gain - 0.5
    log_brackets, norms, normalized, ratios = [], [], [], []
    pairs = [(k, r) for k in k_list for r in r_list]
    for k, r in progress(pairs, "discrete_restriction_scan", verbose):
        index = types.EigenIndex(k=k, d1=plan.d1)
        norm = _projection_norm(index, r, p, plan, iterations)
        norms.append(norm)
        normalized.append(norm / r ** gain)
        ratios.append(normalized[-1] / index.bracket ** predicted)
        log_brackets.append(math.log2(index.bracket))
        log("discrete_restriction_scan", f"k={k} r={r:g} norm={norm:.6e}", verbose)

    fit = fit_exponent(log_brackets, normalized)
    p_limit = 2.0 * plan.d1 / (plan.d1 + 2.0)
    if p > p_limit:
        flag(flags, f"p = {p:g} exceeds 2 d1 / (d1 + 2) = {p_limit:.4f}; no verdict is issued")
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = upper_verdict(fit, predicted, tolerances)

    return ExperimentReport(
        experiment="discrete_restriction_scan",
        inputs={
            "k": k_list,
            "r": r_list,
            "p": p,
            "plan": {
                "d1": plan.d1,
                "k_max": plan.k_max,
                "x_extent": plan.x_extent,
                "n_x": plan.n_x,
            },
        },
        series={
            "log2_bracket": log_brackets,
            "norm": norms,
            "normalized": normalized,
            "ratio": ratios,
        },
        verdict=verdict,
        fit=fit,
        predicted=predicted,
        constants={
            "fitted_constant": max(ratios, default=math.nan),
            "constant_spread": max(ratios) / min(ratios)
            if ratios and min(ratios) > 0.0
            else math.nan,
        },
        flags=tuple(flags),
        tolerances=tolerances,
    )
