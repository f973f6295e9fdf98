"""Private module; avoid importing from directly.
"""

import enum
import math
from dataclasses import dataclass
from typing import Callable, List, Optional

import torch

from .. import types
from ..calculus import GridFunction, GridSpec, lp_norm

Operator = Callable[[GridFunction], GridFunction]
"""Linear operator acting on (batched) grid functions in the space domain."""

EXHAUSTIVE_COLUMN_LIMIT = 4096
"""int: Largest number of columns for which exhaustive norm computation is allowed."""


class NormMethod(enum.Enum):
    """Probing strategy for `opnorm_p_to_2()`."""

    RANDOM_PROBE = "random-probe"
    POWER_ITERATION_ON_DUAL = "power-iteration-on-dual"
    EXHAUSTIVE_SMALL = "exhaustive-small"


@dataclass(frozen=True)
class NormEstimate:
    """Empirical lower bound for an operator norm `||T||_{p -> 2}`."""

    value: float
    trials: int
    method: NormMethod
    columns: int
    """int: Number of columns (grid points in the probed domain) of the operator."""

    def __post_init__(self) -> None:
        if not self.value >= 0.0:
            raise ValueError(f"Norm estimates are nonnegative, got {self.value}.")
        if (
            self.method is NormMethod.EXHAUSTIVE_SMALL
            and self.columns > EXHAUSTIVE_COLUMN_LIMIT
        ):
            raise ValueError(
                f"Exhaustive estimates need at most {EXHAUSTIVE_COLUMN_LIMIT} columns,"
                f" got {self.columns}."
            )


def _ratio(image: GridFunction, probe: GridFunction, p: float) -> torch.Tensor:
    numerator = lp_norm(image, 2.0)
    denominator = lp_norm(probe, p)
    safe = torch.where(denominator > 0.0, denominator, torch.ones_like(denominator))
    return torch.where(denominator > 0.0, numerator / safe, torch.zeros_like(safe))


def _dual_update(
    g: torch.Tensor, p: float, mask: torch.Tensor, spec: GridSpec
) -> torch.Tensor:
    """Maximizer of `Re <g, f>` over the unit `L^p` sphere (up to scaling), restricted
    to `mask`. For `p = 1` this is a unit-mass delta at the largest `|g|`."""
    g = g * mask
    grid_dims = tuple(range(-spec.ndim, 0))
    magnitude = torch.abs(g)
    scale = torch.amax(magnitude, dim=grid_dims, keepdim=True)
    scale = torch.where(scale > 0.0, scale, torch.ones_like(scale))
    if p == 2.0:
        return g / scale
    if p == 1.0:
        flat = torch.abs(g).reshape(g.shape[: -spec.ndim] + (-1,))
        index = torch.argmax(flat, dim=-1, keepdim=True)
        delta = torch.zeros_like(flat, dtype=torch.complex128)
        delta.scatter_(-1, index, torch.ones_like(index, dtype=torch.complex128))
        return delta.reshape(g.shape) / spec.cell_volume
    dual_exponent = p / (p - 1.0)
    normalized = magnitude / scale
    nonzero = magnitude > 0.0
    safe = torch.where(nonzero, magnitude, torch.ones_like(magnitude))
    phase = torch.where(nonzero, g / safe, torch.zeros_like(g))
    return normalized ** (dual_exponent - 1.0) * phase


def structured_probe(
    spec: GridSpec,
    index: int,
    *,
    seed: int = 0,
    mask: Optional[types.MaskTorch] = None,
) -> torch.Tensor:
    """Deterministic probe number `index`: a localized Gaussian bump, random phases on
    the probed set, or a modulated Hermite ground state, cycling in that order.

    Each probe draws from its own generator, so probe sets are nested when the number
    of trials grows.
    """
    generator = torch.Generator().manual_seed(seed * 1_000_003 + index)
    points = spec.points
    x, y = points.x, points.y
    kind = index % 3

    if kind == 0:
        a = (torch.rand(spec.d1, generator=generator, dtype=torch.float64) - 0.5) * spec.x_extent
        b = (torch.rand(spec.d2, generator=generator, dtype=torch.float64) - 0.5) * spec.y_extent
        width = 0.1 + 0.4 * float(torch.rand((), generator=generator, dtype=torch.float64))
        sx = width * spec.x_extent
        sy = width * spec.y_extent
        values = torch.exp(
            -torch.sum((x - a) ** 2, dim=-1) / (2.0 * sx ** 2)
            - torch.sum((y - b) ** 2, dim=-1) / (2.0 * sy ** 2)
        ).to(torch.complex128)
    elif kind == 1:
        angles = 2.0 * math.pi * torch.rand(spec.shape, generator=generator, dtype=torch.float64)
        values = torch.exp(1j * angles)
    else:
        r = spec.eta_min * float(
            1 + torch.randint(0, max(1, spec.n_y // 4), (), generator=generator)
        )
        eta = torch.randn(spec.d2, generator=generator, dtype=torch.float64)
        eta = r * eta / torch.linalg.norm(eta)
        envelope = torch.exp(-torch.sum(y ** 2, dim=-1) / (2.0 * (0.3 * spec.y_extent) ** 2))
        values = (
            torch.exp(-0.5 * r * torch.sum(x ** 2, dim=-1))
            * envelope
            * torch.exp(1j * torch.sum(eta * y, dim=-1))
        )

    if mask is not None:
        values = values * mask
        if not bool(torch.any(torch.abs(values) > 0.0)):
            values = mask.to(torch.complex128)
    return values


def opnorm_p_to_2(
    apply: Operator,
    p: float,
    trials: int,
    *,
    spec: GridSpec,
    adjoint: Optional[Operator] = None,
    method: NormMethod = NormMethod.RANDOM_PROBE,
    iterations: Optional[int] = None,
    mask: Optional[types.MaskTorch] = None,
    seed: int = 0,
    batch_size: int = 8,
) -> NormEstimate:
    """Empirical lower bound `sup ||T f||_2 / ||f||_p` over probes, refined by a power
    iteration on `T* T` (a dual-map ascent for `p < 2`).

    Args:
        apply (Callable): The operator `T`, linear and batch-compatible.
        p (float): Exponent in `[1, 2]`.
        trials (int): Number of probes (ignored for exhaustive `p = 1`).

    Keyword Args:
        spec (GridSpec): Grid the operator acts on.
        adjoint (Callable, optional): The adjoint `T*`; `T` itself when None.
        method (NormMethod, optional): Probing strategy.
        iterations (int, optional): Ascent steps per probe. Defaults to 2 for random
            probes and 24 otherwise.
        mask (torch.Tensor, optional): Probes are supported in this set of grid points.
        seed (int, optional): Seed for the probe generators.
        batch_size (int, optional): Probes processed at once.

    Returns:
        NormEstimate: Lower bound; never reported as the norm itself.
    """
    if not 1.0 <= p <= 2.0:
        raise ValueError(f"Exponent must lie in [1, 2], got {p}.")
    if trials < 1:
        raise ValueError(f"Need at least one trial, got {trials}.")
    adjoint = apply if adjoint is None else adjoint
    mask = torch.ones(spec.shape, dtype=torch.bool) if mask is None else mask
    columns = int(torch.count_nonzero(mask))
    if method is NormMethod.EXHAUSTIVE_SMALL and columns > EXHAUSTIVE_COLUMN_LIMIT:
        raise ValueError(
            f"Exhaustive estimates need at most {EXHAUSTIVE_COLUMN_LIMIT} columns,"
            f" got {columns}."
        )
    if iterations is None:
        iterations = 2 if method is NormMethod.RANDOM_PROBE else 24
    mask_values = mask.to(torch.complex128)

    def ascend(probes: torch.Tensor) -> float:
        f = GridFunction(spec=spec, values=probes)
        image = apply(f)
        best = float(torch.max(_ratio(image, f, p)))
        for _ in range(iterations):
            g = adjoint(image).values
            if not bool(torch.any(torch.abs(g) > 0.0)):
                break
            f = GridFunction(spec=spec, values=_dual_update(g, p, mask_values, spec))
            image = apply(f)
            best = max(best, float(torch.max(_ratio(image, f, p))))
        return best

    value = 0.0
    if method is NormMethod.EXHAUSTIVE_SMALL and p == 1.0:
        # Exact: the supremum over unit-mass deltas, one column at a time
        indices = torch.nonzero(mask.reshape(-1)).squeeze(-1)
        for start in range(0, indices.shape[0], batch_size):
            chunk = indices[start : start + batch_size]
            deltas = torch.zeros((chunk.shape[0], mask.numel()), dtype=torch.complex128)
            deltas[torch.arange(chunk.shape[0]), chunk] = 1.0 / spec.cell_volume
            f = GridFunction(spec=spec, values=deltas.reshape((-1,) + spec.shape))
            value = max(value, float(torch.max(_ratio(apply(f), f, 1.0))))
        return NormEstimate(value=value, trials=columns, method=method, columns=columns)

    probes: List[torch.Tensor] = []
    for i in range(trials):
        if method is NormMethod.RANDOM_PROBE:
            probes.append(structured_probe(spec, i, seed=seed, mask=mask_values))
        else:
            generator = torch.Generator().manual_seed(seed * 1_000_003 + i)
            noise = torch.randn(spec.shape, generator=generator, dtype=torch.float64)
            probes.append(noise.to(torch.complex128) * mask_values)
        if len(probes) == batch_size or i == trials - 1:
            value = max(value, ascend(torch.stack(probes)))
            probes = []

    return NormEstimate(value=value, trials=trials, method=method, columns=columns)
