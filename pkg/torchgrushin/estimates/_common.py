"""Private module; avoid importing from directly.
"""

import warnings
from typing import Iterable, List, Optional, TypeVar

import torch
from tqdm.auto import tqdm

from .. import types
from ..calculus import GridFunction, GridSpec, JointSymbol, apply_joint
from ..geometry import cc_distance, critical_exponent

T = TypeVar("T")


def progress(items: Iterable[T], name: str, verbose: bool) -> Iterable[T]:
    """Progress bar over a sweep; silent unless `verbose`."""
    return tqdm(list(items), desc=name, disable=not verbose, leave=False)


def log(name: str, message: str, verbose: bool) -> None:
    """One-line status message, prefixed by the producing function."""
    if verbose:
        tqdm.write(f"({name}) {message}")


def flag(flags: List[str], message: str, *, stacklevel: int = 3) -> None:
    """Record a diagnostic in a report and raise it as a `RuntimeWarning`."""
    flags.append(message)
    warnings.warn(message, RuntimeWarning, stacklevel=stacklevel)


def check_exponent(p: float) -> None:
    if not 1.0 <= p <= 2.0:
        raise ValueError(f"Exponent must lie in [1, 2], got {p}.")


def restriction_hypothesis_flags(spec: GridSpec, p: float, flags: List[str]) -> bool:
    """Flag runs outside the hypotheses of the truncated restriction estimates.

    Returns:
        bool: Whether `p` exceeds the critical exponent, in which case no verdict can
        be issued.
    """
    if spec.d1 < 3 or spec.d2 < 2:
        flag(
            flags,
            f"dimensions (d1, d2) = ({spec.d1}, {spec.d2}) are outside the hypothesis"
            " d1 >= 3, d2 >= 2 of the truncated restriction estimates",
        )
    p_crit = critical_exponent(spec.d1, spec.d2)
    if p > p_crit:
        flag(
            flags,
            f"p = {p:g} exceeds the critical exponent {p_crit:.4f}; no verdict is issued",
        )
        return True
    return False


def ball_mask(spec: GridSpec, ball: types.Ball) -> types.MaskTorch:
    """Grid points within comparison distance `R` of the ball center."""
    points = spec.points
    center = types.CCPoint(
        x=ball.a.reshape((1,) * spec.ndim + (-1,)),
        y=ball.b.reshape((1,) * spec.ndim + (-1,)),
    )
    mask = cc_distance(points, center) <= ball.radius
    if not bool(torch.any(mask)):
        raise ValueError(f"Ball of radius {ball.radius} contains no grid point.")
    return mask


def joint_operator(G: JointSymbol, *, k_max: Optional[int] = None):
    """`f -> G(L, T) f` as a batch-compatible callable."""

    def apply(f: GridFunction) -> GridFunction:
        return apply_joint(G, f, k_max=k_max)

    return apply


def conj_symbol(G: JointSymbol) -> JointSymbol:
    """Symbol of the adjoint `G(L, T)^* = conj(G)(L, T)`."""
    return JointSymbol(
        fn=lambda lam, r: torch.conj(G(lam, r)),
        lambda_sup=G.lambda_sup,
        vanishes_at_zero=G.vanishes_at_zero,
        name=f"conj({G.name})",
    )


def boundary_shell(spec: GridSpec, fraction: float = 0.1) -> types.MaskTorch:
    """Grid points within `fraction` of the extent from the grid boundary."""
    points = spec.points
    near_x = torch.any(torch.abs(points.x) >= (1.0 - fraction) * spec.x_extent, dim=-1)
    near_y = torch.any(torch.abs(points.y) >= (1.0 - fraction) * spec.y_extent, dim=-1)
    return near_x | near_y
