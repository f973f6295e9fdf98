"""Private module; avoid importing from directly.

Verification suites behind `torchgrushin verify <suite>`. Each suite builds its inputs
from a `RunConfig` plus suite options and returns an `ExperimentReport`.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import torch

from .. import estimates, geometry, hermite, types
from ..calculus import (
    GridFunction,
    GridSpec,
    Symbol1D,
    apply_joint,
    apply_multiplier,
    band_tail,
    band_truncate,
    first_band,
    fourier_y,
    inverse_fourier_y,
    plancherel_spectral_sum,
    smooth_bump,
    truncation_tail,
)
from ..estimates import ExperimentReport, Verdict
from ._config import RunConfig
from ._symbol_specs import parse_symbol


@dataclass(frozen=True)
class SuiteOptions:
    """Suite parameters; None selects the suite's own default."""

    p: Optional[float] = None
    lmin: Optional[int] = None
    lmax: Optional[int] = None
    N: Optional[int] = None
    t: Optional[Tuple[float, ...]] = None
    delta: Optional[float] = None
    margins: Optional[Tuple[float, ...]] = None
    radius: Optional[float] = None
    a: Optional[Tuple[float, ...]] = None
    r: Optional[Tuple[float, ...]] = None
    k: Optional[Tuple[int, ...]] = None
    symbol: Optional[str] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            name: list(value) if isinstance(value, tuple) else value
            for name, value in self.__dict__.items()
            if value is not None
        }


def _pick(value, default):
    return default if value is None else value


def _symbol(options: SuiteOptions, default: Symbol1D) -> Symbol1D:
    return default if options.symbol is None else parse_symbol(options.symbol)


def compact_bump(
    spec: GridSpec,
    *,
    x_radius: float,
    y_radius: float,
    center: Optional[types.CCPoint] = None,
) -> GridFunction:
    """Smooth function `exp(1 - 1 / (1 - rho^2))` on the anisotropic ellipsoid
    `rho^2 = |x - a|^2 / x_radius^2 + |y - b|^2 / y_radius^2 < 1`, zero outside."""
    points = spec.points
    a = torch.zeros(spec.d1, dtype=torch.float64) if center is None else center.x
    b = torch.zeros(spec.d2, dtype=torch.float64) if center is None else center.y
    rho_squared = torch.sum((points.x - a) ** 2, dim=-1) / x_radius ** 2 + torch.sum(
        (points.y - b) ** 2, dim=-1
    ) / y_radius ** 2
    inside = rho_squared < 1.0
    safe = torch.where(inside, 1.0 - rho_squared, torch.ones_like(rho_squared))
    values = torch.where(inside, torch.exp(1.0 - 1.0 / safe), torch.zeros_like(safe))
    return GridFunction(spec=spec, values=values)


def _remove_zero_frequency(f: GridFunction) -> GridFunction:
    """Project out the `eta = 0` plane, which band-truncated symbols do not see."""
    spectrum = fourier_y(f)
    values = spectrum.values.clone()
    values[(Ellipsis,) + (0,) * f.spec.d2] = 0.0
    return inverse_fourier_y(spectrum.with_values(values))


def _dyadic_up_to(limit: int) -> List[int]:
    values = [2 ** j for j in range(0, max(limit, 1).bit_length()) if 2 ** j <= limit]
    if limit not in values:
        values.append(limit)
    return values


def _report(
    name: str,
    inputs: Dict[str, object],
    series: Dict[str, List[float]],
    checks: Dict[str, bool],
    constants: Dict[str, float],
    config: RunConfig,
) -> ExperimentReport:
    """Report for suites that check identities rather than fit exponents."""
    failed = sorted(check for check, passed in checks.items() if not passed)
    return ExperimentReport(
        experiment=name,
        inputs=inputs,
        series=series,
        verdict=Verdict.FAIL if failed else Verdict.PASS,
        constants=constants,
        flags=tuple(f"check failed: {check}" for check in failed),
        tolerances=config.experiment_tolerances(),
    )


def hermite_suite(config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    """Orthonormality, eigen-residual convergence and trace identities."""
    plan = hermite.default_plan(config.d1, config.k_max)
    gram = hermite.gram_residual(plan)

    nu = types.MultiIndex(entries=(min(2, config.k_max),) + (0,) * (config.d1 - 1))
    plans = [plan, plan.refined(2), plan.refined(4)]
    residuals = [hermite.eigen_residual(nu, 1.0, p) for p in plans]
    reductions = [residuals[i] / residuals[i + 1] for i in range(len(residuals) - 1)]

    points = plan.points
    trace_errors = []
    for k in range(config.k_max + 1):
        index = types.EigenIndex(k=k, d1=config.d1)
        trace = plan.cell_volume * float(torch.sum(hermite.diag_kernel(index, 1.0, points)))
        dim = hermite.eigenspace_dim(k, config.d1)
        trace_errors.append(abs(trace - dim) / dim)

    return _report(
        "hermite",
        {"d1": config.d1, "k_max": config.k_max, "n_x": plan.n_x, "x_extent": plan.x_extent},
        {
            "k": [float(k) for k in range(config.k_max + 1)],
            "trace_error": trace_errors,
        },
        {
            "gram_residual": gram <= 1e-8,
            "eigen_residual_convergence": all(ratio >= 4.0 for ratio in reductions),
            "trace_identity": max(trace_errors) <= 1e-6,
        },
        {
            "gram_residual": gram,
            "eigen_residual": residuals[0],
            "eigen_residual_reduction": min(reductions),
            "max_trace_error": max(trace_errors),
        },
        config,
    )


def joint_calculus_suite(config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    """Plancherel identity, band reconstruction and band disjointness."""
    spec = config.grid_spec()
    bump = config.dyadic_bump()
    F = _symbol(options, smooth_bump(0.25, 4.0))
    lmin = _pick(options.lmin, first_band(spec.d1))
    lmax = _pick(options.lmax, 5)
    ells = list(range(lmin, lmax + 1))
    tail_tolerance = config.experiment_tolerances().tail_tolerance

    f = _remove_zero_frequency(
        compact_bump(spec, x_radius=0.5 * spec.x_extent, y_radius=0.5 * spec.y_extent)
    )
    f_energy = float(f.norm()) ** 2

    pieces = []
    plancherel_errors = []
    for ell in ells:
        G = band_truncate(F, ell, bump)
        piece = apply_joint(G, f, tail_tolerance=tail_tolerance)
        pieces.append(piece)
        direct = float(piece.norm()) ** 2
        spectral = float(plancherel_spectral_sum(G, f))
        plancherel_errors.append(abs(direct - spectral) / max(direct, 1e-300))

    total = apply_joint(band_tail(F, lmax, bump), f, tail_tolerance=tail_tolerance)
    for piece in pieces:
        total = total + piece
    full = apply_multiplier(F, f, tail_tolerance=tail_tolerance)
    reconstruction = float((total - full).norm()) / max(float(full.norm()), 1e-300)
    if lmin > first_band(spec.d1):
        # Lower bands are missing from the sum
        reconstruction = math.nan
    _, tail = truncation_tail(f)
    budget = max(1e-10, float(tail))

    overlaps = [
        abs(complex(pieces[i].inner(pieces[j]))) / f_energy
        for i in range(len(ells))
        for j in range(i + 2, len(ells))
    ]

    return _report(
        "joint_calculus",
        {"symbol": F.name, "ell": ells, "bump": config.bump, "grid": spec.to_dict()},
        {"ell": [float(ell) for ell in ells], "plancherel_error": plancherel_errors},
        {
            "plancherel_identity": max(plancherel_errors) <= 1e-8,
            "reconstruction": not reconstruction > budget,
            "band_disjointness": max(overlaps, default=0.0) <= 1e-10,
        },
        {
            "reconstruction_error": reconstruction,
            "tail_budget": budget,
            "max_band_overlap": max(overlaps, default=0.0),
        },
        config,
    )


def restriction_suite(config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    ells = range(_pick(options.lmin, 1), _pick(options.lmax, 5) + 1)
    return estimates.restriction_decay(
        _symbol(options, smooth_bump(0.25, 4.0)),
        _pick(options.p, 1.0),
        list(ells),
        spec=config.grid_spec(),
        bump=config.dyadic_bump(),
        trials=config.trials,
        tolerances=config.experiment_tolerances(),
        seed=config.seed,
        verbose=config.verbose,
    )


def weighted_plancherel_suite(config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    spec = config.grid_spec()
    ells = range(_pick(options.lmin, 1), _pick(options.lmax, 5) + 1)
    origin = types.CCPoint(
        x=torch.zeros(spec.d1, dtype=torch.float64),
        y=torch.zeros(spec.d2, dtype=torch.float64),
    )
    return estimates.weighted_plancherel(
        _symbol(options, smooth_bump(0.25, 4.0)),
        list(ells),
        _pick(options.N, 0),
        origin,
        spec=spec,
        bump=config.dyadic_bump(),
        tolerances=config.experiment_tolerances(),
        verbose=config.verbose,
    )


REFINEMENT_FACTORS = (1, 2, 4)
"""Tuple[int, ...]: Grid refinements swept by the propagation and Riesz suites."""

# Values below this count as converged in refinement studies.
_NUMERICAL_ZERO = 1e-12


def _refinement_study(
    spec: GridSpec,
    run: Callable[[GridSpec], ExperimentReport],
    metric: Callable[[ExperimentReport], float],
    metric_name: str,
    budget: float,
) -> ExperimentReport:
    """Repeat an experiment on refined copies of `spec`.

    Passes when the metric never grows from one level to the next and the finest level
    is within `budget`. Any inconclusive level makes the study inconclusive.
    """
    levels = [spec.refined(factor) for factor in REFINEMENT_FACTORS]
    reports = [run(level) for level in levels]
    values = [metric(report) for report in reports]

    decreasing = all(
        b <= a or b <= _NUMERICAL_ZERO for a, b in zip(values[:-1], values[1:])
    )
    if any(report.verdict is Verdict.INCONCLUSIVE for report in reports):
        verdict = Verdict.INCONCLUSIVE
    elif decreasing and values[-1] <= budget:
        verdict = Verdict.PASS
    else:
        verdict = Verdict.FAIL

    flags = [
        f"n_x={level.n_x}, n_y={level.n_y}: {message}"
        for level, report in zip(levels, reports)
        for message in report.flags
    ]
    if not decreasing:
        flags.append(f"{metric_name} does not decrease under grid refinement")

    finest = reports[-1]
    inputs = dict(finest.inputs)
    inputs["refinement_factors"] = list(REFINEMENT_FACTORS)
    constants = dict(finest.constants)
    constants[f"finest_{metric_name}"] = values[-1]
    constants[f"{metric_name}_budget"] = budget
    return ExperimentReport(
        experiment=finest.experiment,
        inputs=inputs,
        series={
            "n_x": [float(level.n_x) for level in levels],
            "n_y": [float(level.n_y) for level in levels],
            metric_name: values,
        },
        verdict=verdict,
        constants=constants,
        flags=tuple(flags),
        tolerances=finest.tolerances,
    )


def propagation_suite(config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    """Leakage of the cosine propagator at the first margin, under grid refinement."""
    t = _pick(options.t, (0.5,))
    tolerances = config.experiment_tolerances()

    def run(spec: GridSpec) -> ExperimentReport:
        f = compact_bump(spec, x_radius=0.25 * spec.x_extent, y_radius=0.25 * spec.y_extent)
        return estimates.propagation_leakage(
            t[0],
            f,
            margins=_pick(options.margins, (0.5, 1.0, 2.0)),
            tolerances=tolerances,
            verbose=config.verbose,
        )

    return _refinement_study(
        config.grid_spec(),
        run,
        lambda report: report.series["leakage"][0],
        "leakage",
        tolerances.leakage_budget,
    )


def riesz_suite(config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    """Spread of Bochner-Riesz ratios across scales, under grid refinement."""
    tolerances = config.experiment_tolerances()

    def run(spec: GridSpec) -> ExperimentReport:
        corpus = [
            compact_bump(spec, x_radius=0.25 * spec.x_extent, y_radius=0.25 * spec.y_extent),
            compact_bump(spec, x_radius=0.4 * spec.x_extent, y_radius=0.15 * spec.y_extent),
        ]
        return estimates.riesz_uniformity(
            _pick(options.delta, 5.0),
            _pick(options.p, 1.0),
            _pick(options.t, (0.25, 1.0, 4.0)),
            corpus,
            tolerances=tolerances,
            verbose=config.verbose,
        )

    return _refinement_study(
        config.grid_spec(),
        run,
        lambda report: report.constants["max_spread"],
        "spread",
        tolerances.uniformity_budget,
    )


def stein_tomas_suite(config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    spec = config.grid_spec()
    ball = types.Ball(
        center=types.CCPoint(
            x=torch.zeros(spec.d1, dtype=torch.float64),
            y=torch.zeros(spec.d2, dtype=torch.float64),
        ),
        radius=_pick(options.radius, 2.0),
    )
    return estimates.stein_tomas_condition(
        _symbol(options, smooth_bump(0.25, 1.0)),
        _pick(options.t, (0.125, 0.25, 0.5, 1.0)),
        ball,
        _pick(options.p, 1.0),
        spec=spec,
        trials=config.trials,
        tolerances=config.experiment_tolerances(),
        seed=config.seed,
        verbose=config.verbose,
    )


def geometry_suite(config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    """Dilation homogeneity, volume doubling and slab counts."""
    d1, d2 = config.d1, config.d2
    generator = torch.Generator().manual_seed(config.seed)

    def sample(n: int) -> types.CCPoint:
        return types.CCPoint(
            x=4.0 * torch.randn((n, d1), generator=generator, dtype=torch.float64),
            y=4.0 * torch.randn((n, d2), generator=generator, dtype=torch.float64),
        )

    trials = 10_000
    z, w = sample(trials), sample(trials)
    t = torch.exp(2.0 * torch.randn((trials, 1), generator=generator, dtype=torch.float64))
    dilated = types.CCPoint(x=t * z.x, y=t ** 2 * z.y)
    dilated_w = types.CCPoint(x=t * w.x, y=t ** 2 * w.y)
    expected = t[:, 0] * geometry.cc_distance(z, w)
    homogeneity = float(
        torch.max(torch.abs(geometry.cc_distance(dilated, dilated_w) - expected) / expected)
    )

    d = geometry.topological_dimension(d1, d2)
    Q = geometry.homogeneous_dimension(d1, d2)
    radii = torch.exp(2.0 * torch.randn(1000, generator=generator, dtype=torch.float64))
    centers = sample(1000).x
    doubling = [
        geometry.ball_volume(2.0 * float(R), a, d2) / geometry.ball_volume(float(R), a, d2)
        for R, a in zip(radii, centers)
    ]
    slack = 1.0 + 1e-12

    iotas, levels, slab_ratios = [], [], []
    for iota in range(0, 5):
        R = 2.0 ** iota
        ball = types.Ball(
            center=types.CCPoint(
                x=torch.zeros(d1, dtype=torch.float64), y=torch.zeros(d2, dtype=torch.float64)
            ),
            radius=R,
        )
        cell = geometry.hull_cell(ball)
        for ell in range(0, iota + 1):
            count = len(geometry.y_slab_decompose(cell, ell, iota))
            iotas.append(float(iota))
            levels.append(float(ell))
            slab_ratios.append(count / 2.0 ** ((iota - ell) * d2))
    slab_spread = max(slab_ratios) / min(slab_ratios)

    return _report(
        "geometry",
        {"d1": d1, "d2": d2, "homogeneity_trials": trials, "doubling_trials": 1000},
        {"iota": iotas, "ell": levels, "slab_ratio": slab_ratios},
        {
            "homogeneity": homogeneity <= 1e-12,
            "doubling": all(2.0 ** d / slack <= r <= 2.0 ** Q * slack for r in doubling),
            "slab_counts": slab_spread <= 3.0 ** d2,
        },
        {
            "homogeneity_error": homogeneity,
            "min_doubling": min(doubling),
            "max_doubling": max(doubling),
            "slab_spread": slab_spread,
        },
        config,
    )


def hermite_bounds_suite(config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    d1 = config.d1
    # Indices with [k] <= 41
    k_limit = (41 - d1) // 2
    k_list = _pick(options.k, tuple(_dyadic_up_to(k_limit)))
    plan = hermite.default_plan(d1, max(k_list))
    return estimates.hermite_bound_scan(
        k_list,
        _pick(options.r, (1.0, 2.0)),
        plan.points,
        tolerances=config.experiment_tolerances(),
        verbose=config.verbose,
    )


def away_gain_suite(config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    spec = config.grid_spec()
    magnitudes = _pick(options.a, tuple(spec.x_extent / 2.0 ** j for j in (4, 3, 2, 1)))
    centers = [(m,) + (0.0,) * (spec.d1 - 1) for m in magnitudes]
    return estimates.away_from_origin_gain(
        _symbol(options, smooth_bump(0.25, 4.0)),
        _pick(options.p, 1.0),
        centers,
        spec=spec,
        radii=None if options.radius is None else [options.radius] * len(centers),
        trials=config.trials,
        tolerances=config.experiment_tolerances(),
        seed=config.seed,
        verbose=config.verbose,
    )


def discrete_restriction_suite(config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    k_list = _pick(options.k, tuple(_dyadic_up_to(config.k_max)))
    r_list = _pick(options.r, (1.0,))
    plan = hermite.default_plan(config.d1, max(k_list), max(r_list))
    if min(r_list) < max(r_list):
        # Extent for the smallest frequency, spacing for the largest
        wide = hermite.default_plan(config.d1, max(k_list), min(r_list))
        factor = 2 ** max(0, math.ceil(math.log2(wide.step / plan.step)))
        plan = wide.refined(factor)
    return estimates.discrete_restriction_scan(
        k_list,
        r_list,
        _pick(options.p, 1.0),
        plan,
        tolerances=config.experiment_tolerances(),
        verbose=config.verbose,
    )


SUITES: Dict[str, Callable[[RunConfig, SuiteOptions], ExperimentReport]] = {
    "hermite": hermite_suite,
    "plancherel": joint_calculus_suite,
    "joint-calculus": joint_calculus_suite,
    "restriction": restriction_suite,
    "weighted-plancherel": weighted_plancherel_suite,
    "propagation": propagation_suite,
    "riesz": riesz_suite,
    "stein-tomas": stein_tomas_suite,
    "geometry": geometry_suite,
    "hermite-bounds": hermite_bounds_suite,
    "away-gain": away_gain_suite,
    "discrete-restriction": discrete_restriction_suite,
}
"""Dict[str, Callable]: Suite name to runner."""


def run_suite(name: str, config: RunConfig, options: SuiteOptions) -> ExperimentReport:
    """Run a named suite and embed the resolved config and options in its report."""
    if name not in SUITES:
        raise ValueError(f"Unknown suite `{name}`; expected one of {sorted(SUITES.keys())}.")
    report = SUITES[name](config, options)
    resolved = config.to_dict()
    resolved["suite"] = name
    resolved["options"] = options.to_dict()
    return report.with_config(resolved)


def suite_names() -> Sequence[str]:
    return sorted(SUITES.keys())
