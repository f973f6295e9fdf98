"""Private module; avoid importing from directly.
"""

import math
import warnings
from typing import List, Optional, Sequence

import torch

from .. import types
from ..calculus import (
    GridFunction,
    apply_multiplier,
    bochner_riesz,
    cosine_propagate,
    lp_norm,
    regrid_clipped_fraction,
    regrid_dilate,
    truncation_tail,
)
from ..geometry import cc_distance_to_set
from ._common import boundary_shell, flag, log, progress
from ._report import ExperimentReport, ExperimentTolerances, Verdict


def propagation_leakage(
    t: float,
    f: GridFunction,
    *,
    margins: Sequence[float] = (0.5,),
    kappa: Optional[float] = None,
    k_max: Optional[int] = None,
    tolerances: ExperimentTolerances = ExperimentTolerances(),
    verbose: bool = False,
) -> ExperimentReport:
    """Finite propagation speed: mass of `cos(t sqrt(L)) f` at comparison distance
    greater than `|t| (1 + eps) kappa` from `U = {f != 0}`, relative to `||f||_2`.

    The first margin decides the verdict; the others show how leakage falls off.

    Args:
        t (float): Propagation time.
        f (GridFunction): Unbatched samples in the space domain, supported well inside
            the grid.

    Keyword Args:
        margins (Sequence[float], optional): Relative margins `eps > 0`.
        kappa (float, optional): Comparability allowance of the comparison metric.
            Defaults to `tolerances.kappa`.
        k_max (int, optional): Overrides `f.spec.k_max`.
        tolerances (ExperimentTolerances, optional): Verdict tolerances.
        verbose (bool, optional): Print progress.

    Returns:
        ExperimentReport: Leakage per margin.
    """
    if f.frequency:
        raise ValueError("Propagation leakage is measured in the space domain.")
    if f.batch_shape != ():
        raise ValueError(f"Expected a single grid function, got batch {f.batch_shape}.")
    margins = [float(eps) for eps in margins]
    if not margins or any(eps <= 0.0 for eps in margins):
        raise ValueError(f"Margins must be positive, got {margins}.")
    kappa = tolerances.kappa if kappa is None else kappa
    spec = f.spec
    flags: List[str] = []

    support = torch.abs(f.values) > 0.0
    if not bool(torch.any(support)):
        raise ValueError("Cannot measure leakage of the zero function.")
    points = spec.points
    flat = types.CCPoint(
        x=points.x.reshape(-1, spec.d1), y=points.y.reshape(-1, spec.d2)
    )
    flat_support = support.reshape(-1)
    distance = cc_distance_to_set(
        flat,
        types.CCPoint(x=flat.x[flat_support], y=flat.y[flat_support]),
    ).reshape(spec.shape)

    _, tail = truncation_tail(f, k_max=k_max)
    if float(tail) > tolerances.tail_tolerance:
        flag(flags, f"relative truncation tail {float(tail):.2e} of f exceeds the tolerance")
    propagated = cosine_propagate(t, f, k_max=k_max)
    energy = torch.abs(propagated.values) ** 2
    f_norm = float(f.norm())

    shell = boundary_shell(spec)
    reach = abs(t) * (1.0 + max(margins)) * kappa
    if bool(torch.any(shell & (distance <= reach))):
        flag(
            flags,
            f"support of f propagated by {reach:g} reaches the grid boundary;"
            " wrap-around may contaminate the leakage",
        )

    leakages = []
    for eps in progress(margins, "propagation_leakage", verbose):
        outside = distance > abs(t) * (1.0 + eps) * kappa
        leaked = math.sqrt(spec.cell_volume * float(torch.sum(energy[outside])))
        leakages.append(leaked / f_norm)
        log("propagation_leakage", f"t={t:g} eps={eps:g} leakage={leakages[-1]:.3e}", verbose)

    verdict = Verdict.PASS if leakages[0] <= tolerances.leakage_budget else Verdict.FAIL
    return ExperimentReport(
        experiment="propagation_leakage",
        inputs={
            "t": t,
            "margins": margins,
            "kappa": kappa,
            "support_points": int(torch.count_nonzero(support)),
            "grid": spec.to_dict(),
        },
        series={"margin": margins, "leakage": leakages},
        verdict=verdict,
        constants={"f_l2_norm": f_norm},
        flags=tuple(flags),
        tolerances=tolerances,
    )


def riesz_uniformity(
    delta: float,
    p: float,
    t_list: Sequence[float],
    corpus: Sequence[GridFunction],
    *,
    k_max: Optional[int] = None,
    clip_threshold: float = 1e-6,
    tolerances: ExperimentTolerances = ExperimentTolerances(),
    verbose: bool = False,
) -> ExperimentReport:
    """Scale invariance of Bochner-Riesz means: the ratio
    `||(1 - t L)_+^delta g||_p / ||g||_p` for `g = f o delta_{t^{-1/2}}` does not
    depend on `t`. The spread of the ratio across positive scales measures the
    interpolation and truncation residual of the discretization.

    `t = 0` is the identity and contributes a ratio of one; it is reported but left
    out of the spread.

    Args:
        delta (float): Bochner-Riesz order.
        p (float): Exponent, `p >= 1`.
        t_list (Sequence[float]): Nonnegative scales.
        corpus (Sequence[GridFunction]): Unbatched test functions in the space domain.

    Keyword Args:
        k_max (int, optional): Overrides the grid's `k_max`.
        clip_threshold (float, optional): Energy fraction above which a regridded
            corpus member is flagged as clipped.
        tolerances (ExperimentTolerances, optional): Verdict tolerances.
        verbose (bool, optional): Print progress.

    Returns:
        ExperimentReport: Ratios per corpus member and scale, and the largest spread.
    """
    if not p >= 1.0:
        raise ValueError(f"Exponent must satisfy p >= 1, got {p}.")
    t_list = [float(t) for t in t_list]
    if not t_list or any(t < 0.0 for t in t_list):
        raise ValueError(f"Scales must be nonnegative, got {t_list}.")
    if len(corpus) == 0:
        raise ValueError("Corpus is empty.")
    flags: List[str] = []

    members, scales, ratios, clipped_series = [], [], [], []
    spreads = []
    jobs = [(i, t) for i in range(len(corpus)) for t in t_list]
    member_ratios: List[List[float]] = [[] for _ in corpus]
    for i, t in progress(jobs, "riesz_uniformity", verbose):
        f = corpus[i]
        if f.frequency or f.batch_shape != ():
            raise ValueError("Corpus members must be unbatched space-domain samples.")
        if t == 0.0:
            ratio, clipped = 1.0, 0.0
        else:
            s = t ** -0.5
            clipped = float(regrid_clipped_fraction(s, f))
            if clipped > clip_threshold:
                flag(flags, f"member {i} loses {clipped:.2e} of its energy at t={t:g}")
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                g = regrid_dilate(s, f, clip_threshold=clip_threshold)
            _, tail = truncation_tail(g, k_max=k_max)
            if float(tail) > tolerances.tail_tolerance:
                flag(
                    flags,
                    f"member {i} at t={t:g} has relative truncation tail {float(tail):.2e}",
                )
            image = apply_multiplier(bochner_riesz(delta, t), g, k_max=k_max)
            denominator = float(lp_norm(g, p))
            ratio = float(lp_norm(image, p)) / denominator if denominator > 0.0 else 0.0
            member_ratios[i].append(ratio)
        members.append(float(i))
        scales.append(t)
        ratios.append(ratio)
        clipped_series.append(clipped)
        log("riesz_uniformity", f"member={i} t={t:g} ratio={ratio:.6f}", verbose)

    for values in member_ratios:
        if len(values) >= 2 and min(values) > 0.0:
            spreads.append(max(values) / min(values) - 1.0)
    spread = max(spreads, default=0.0)
    if any(len(values) < 2 for values in member_ratios):
        verdict = Verdict.INCONCLUSIVE
    elif spread <= tolerances.uniformity_budget:
        verdict = Verdict.PASS
    else:
        verdict = Verdict.FAIL

    return ExperimentReport(
        experiment="riesz_uniformity",
        inputs={
            "delta": delta,
            "p": p,
            "t": t_list,
            "corpus_size": len(corpus),
            "grid": corpus[0].spec.to_dict(),
        },
        series={
            "member": members,
            "t": scales,
            "ratio": ratios,
            "clipped_fraction": clipped_series,
        },
        verdict=verdict,
        constants={"max_spread": spread, "max_ratio": max(ratios)},
        flags=tuple(flags),
        tolerances=tolerances,
    )
