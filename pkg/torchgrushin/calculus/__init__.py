from ._bumps import DyadicBump, HatDyadicBump, SmoothDyadicBump, make_bump
from ._fourier import fourier_y, inverse_fourier_y
from ._grid import GridFunction, GridSpec, lp_norm, suggest_k_max
from ._joint_calculus import (
    JointCalculus,
    TruncationError,
    apply_joint,
    apply_L,
    apply_L_finite_difference,
    apply_multiplier,
    cosine_propagate,
    grid_delta,
    integral_kernel,
    joint_calculus,
    plancherel_spectral_sum,
    truncation_tail,
)
from ._regrid import regrid_clipped_fraction, regrid_dilate
from ._serialization import load_grid_function, save_grid_function
from ._symbol_norms import (
    SymbolGrid,
    dyadic_piece,
    dyadic_pieces_sum,
    log_spaced_scales,
    sloc_norm,
    sobolev_norm,
)
from ._symbols import (
    JointSymbol,
    Symbol1D,
    band_tail,
    band_truncate,
    bochner_riesz,
    check_restriction_support,
    cosine_symbol,
    dyadic_localizer,
    first_band,
    from_multiplier,
    from_samples,
    gaussian,
    indicator,
    smooth_bump,
    warn_if_aliased,
)

__all__ = [
    "DyadicBump",
    "GridFunction",
    "GridSpec",
    "HatDyadicBump",
    "JointCalculus",
    "JointSymbol",
    "SmoothDyadicBump",
    "Symbol1D",
    "SymbolGrid",
    "TruncationError",
    "apply_L",
    "apply_L_finite_difference",
    "apply_joint",
    "apply_multiplier",
    "band_tail",
    "band_truncate",
    "bochner_riesz",
    "check_restriction_support",
    "cosine_propagate",
    "cosine_symbol",
    "dyadic_localizer",
    "dyadic_piece",
    "dyadic_pieces_sum",
    "first_band",
    "fourier_y",
    "from_multiplier",
    "from_samples",
    "gaussian",
    "grid_delta",
    "indicator",
    "integral_kernel",
    "inverse_fourier_y",
    "joint_calculus",
    "load_grid_function",
    "log_spaced_scales",
    "lp_norm",
    "make_bump",
    "plancherel_spectral_sum",
    "regrid_clipped_fraction",
    "regrid_dilate",
    "save_grid_function",
    "sloc_norm",
    "smooth_bump",
    "sobolev_norm",
    "suggest_k_max",
    "truncation_tail",
    "warn_if_aliased",
]
