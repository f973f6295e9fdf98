from ._kernels import discrete_restriction_scan, hermite_bound_scan, weighted_plancherel
from ._norms import (
    EXHAUSTIVE_COLUMN_LIMIT,
    NormEstimate,
    NormMethod,
    opnorm_p_to_2,
    structured_probe,
)
from ._propagation import propagation_leakage, riesz_uniformity
from ._report import (
    SCHEMA,
    ExperimentReport,
    ExperimentTolerances,
    ExponentFit,
    Verdict,
    fit_exponent,
    upper_verdict,
    window_verdict,
)
from ._restriction import (
    away_from_origin_gain,
    restriction_decay,
    restriction_tail,
    stein_tomas_condition,
)

__all__ = [
    "EXHAUSTIVE_COLUMN_LIMIT",
    "ExperimentReport",
    "ExperimentTolerances",
    "ExponentFit",
    "NormEstimate",
    "NormMethod",
    "SCHEMA",
    "Verdict",
    "away_from_origin_gain",
    "discrete_restriction_scan",
    "fit_exponent",
    "hermite_bound_scan",
    "opnorm_p_to_2",
    "propagation_leakage",
    "restriction_decay",
    "restriction_tail",
    "riesz_uniformity",
    "stein_tomas_condition",
    "structured_probe",
    "upper_verdict",
    "weighted_plancherel",
    "window_verdict",
]
