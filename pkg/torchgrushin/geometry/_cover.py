"""Private module; avoid importing from directly.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import torch

from .. import types
from ._metric import box_hull, cc_distance


class CoverCertificationError(RuntimeError):
    """Raised when the overlap certification scan of a cover exceeds its ceiling."""


@dataclass(frozen=True)
class AxisBox:
    """Axis-aligned box in R^{d1} x R^{d2}, half-open on the upper faces."""

    x_lower: Tuple[float, ...]
    x_upper: Tuple[float, ...]
    y_lower: Tuple[float, ...]
    y_upper: Tuple[float, ...]

    def __post_init__(self) -> None:
        assert len(self.x_lower) == len(self.x_upper)
        assert len(self.y_lower) == len(self.y_upper)
        if any(lo >= hi for lo, hi in zip(self.x_lower + self.y_lower, self.x_upper + self.y_upper)):
            raise ValueError("Box bounds must satisfy lower < upper on every axis.")

    @property
    def d1(self) -> int:
        return len(self.x_lower)

    @property
    def d2(self) -> int:
        return len(self.y_lower)

    @property
    def volume(self) -> float:
        """float: Lebesgue measure."""
        return math.prod(
            hi - lo
            for lo, hi in zip(self.x_lower + self.y_lower, self.x_upper + self.y_upper)
        )

    def contains(self, z: types.CCPoint) -> torch.Tensor:
        """Boolean mask of points in the box."""
        x = torch.as_tensor(z.x, dtype=torch.float64)
        y = torch.as_tensor(z.y, dtype=torch.float64)
        x_lower = torch.tensor(self.x_lower, dtype=torch.float64)
        x_upper = torch.tensor(self.x_upper, dtype=torch.float64)
        y_lower = torch.tensor(self.y_lower, dtype=torch.float64)
        y_upper = torch.tensor(self.y_upper, dtype=torch.float64)
        return torch.all((x >= x_lower) & (x < x_upper), dim=-1) & torch.all(
            (y >= y_lower) & (y < y_upper), dim=-1
        )

    def sample(self, n: int, *, generator: Optional[torch.Generator] = None) -> types.CCPoint:
        """Draw `n` uniform points from the box."""
        x_lower = torch.tensor(self.x_lower, dtype=torch.float64)
        x_upper = torch.tensor(self.x_upper, dtype=torch.float64)
        y_lower = torch.tensor(self.y_lower, dtype=torch.float64)
        y_upper = torch.tensor(self.y_upper, dtype=torch.float64)
        u = torch.rand((n, self.d1 + self.d2), dtype=torch.float64, generator=generator)
        return types.CCPoint(
            x=x_lower + u[:, : self.d1] * (x_upper - x_lower),
            y=y_lower + u[:, self.d1 :] * (y_upper - y_lower),
        )


@dataclass(frozen=True)
class CoverCell:
    """Cell `B_n` of a cover, with its designated center `(a_n, b_n)`."""

    box: AxisBox
    center: types.CCPoint


@dataclass(frozen=True)
class Cover:
    """Disjoint decomposition of a region into cells `B_n`, each contained in the
    comparison ball `B_R(a_n, b_n)` of its designated center."""

    region: AxisBox
    radius: float
    cells: Tuple[CoverCell, ...]
    overlap_bounds: Dict[float, int]
    """Dict[float, int]: For each declared dilation factor `lambda`, the largest
    number of dilated balls `B_{lambda R}(a_n, b_n)` containing a witness point."""

    def overlap_bound(self, dilation: float) -> int:
        """Certified overlap bound for a declared dilation factor."""
        if dilation not in self.overlap_bounds:
            raise KeyError(f"Dilation factor {dilation} was not declared for this cover.")
        return self.overlap_bounds[dilation]

    @property
    def centers(self) -> types.CCPoint:
        """CCPoint: Cell centers stacked into a flat batch."""
        return types.CCPoint(
            x=torch.stack([torch.as_tensor(c.center.x) for c in self.cells]),
            y=torch.stack([torch.as_tensor(c.center.y) for c in self.cells]),
        )


def _split(lower: float, upper: float, max_side: float) -> List[Tuple[float, float]]:
    """Split an interval into the fewest equal pieces of length at most `max_side`."""
    count = max(1, math.ceil((upper - lower) / max_side - 1e-12))
    edges = [lower + (upper - lower) * i / count for i in range(count + 1)]
    edges[-1] = upper
    return list(zip(edges[:-1], edges[1:]))


def _grid_boxes(
    lower: Sequence[float], upper: Sequence[float], max_side: float
) -> List[Tuple[Tuple[float, ...], Tuple[float, ...]]]:
    per_axis = [_split(lo, hi, max_side) for lo, hi in zip(lower, upper)]
    output = []
    for pieces in itertools.product(*per_axis):
        output.append(
            (tuple(p[0] for p in pieces), tuple(p[1] for p in pieces))
        )
    return output


def _witness_points(region: AxisBox, per_axis: int) -> types.CCPoint:
    axes = [
        torch.linspace(lo, hi, per_axis, dtype=torch.float64)
        for lo, hi in zip(region.x_lower + region.y_lower, region.x_upper + region.y_upper)
    ]
    mesh = torch.stack(torch.meshgrid(*axes, indexing="ij"), dim=-1).reshape(
        -1, region.d1 + region.d2
    )
    return types.CCPoint(x=mesh[:, : region.d1], y=mesh[:, region.d1 :])


def cover(
    region: AxisBox,
    R: float,
    dilations: Sequence[float],
    *,
    witness_per_axis: int = 33,
    overlap_ceiling: int = 100_000,
) -> Cover:
    """Decompose a bounded region into disjoint anisotropic boxes.

    Columns in the first layer have side at most `R / sqrt(d1)`, so that `|x - a_n|`
    stays below `R / 2`. Within a column centered at `a_n`, second layer boxes have
    Euclidean half-diagonal `(R / 4) max{R, 2 |a_n|}`, which keeps the second term of
    the comparison function below `R / 2`. Every cell therefore lies in the closed
    comparison ball `B_R(a_n, b_n)` about its center, and its volume is comparable to
    `ball_volume(R, a_n)`.

    Args:
        region (AxisBox): Bounded region to decompose.
        R (float): Common radius. Must be positive.
        dilations (Sequence[float]): Dilation factors `lambda >= 1` to certify.

    Keyword Args:
        witness_per_axis (int, optional): Witness grid resolution for certification.
        overlap_ceiling (int, optional): Largest acceptable overlap count.

    Returns:
        Cover: Cover with certified overlap bounds.
    """
    if not R > 0.0:
        raise ValueError(f"Radius must be positive, got {R}.")
    if any(not dilation >= 1.0 for dilation in dilations):
        raise ValueError("Dilation factors must be at least 1.")
    d1, d2 = region.d1, region.d2

    cells: List[CoverCell] = []
    for x_lower, x_upper in _grid_boxes(region.x_lower, region.x_upper, R / math.sqrt(d1)):
        a = torch.tensor(
            [0.5 * (lo + hi) for lo, hi in zip(x_lower, x_upper)], dtype=torch.float64
        )
        half_diagonal = 0.25 * R * max(R, 2.0 * float(torch.linalg.norm(a)))
        y_side = 2.0 * half_diagonal / math.sqrt(d2)
        for y_lower, y_upper in _grid_boxes(region.y_lower, region.y_upper, y_side):
            b = torch.tensor(
                [0.5 * (lo + hi) for lo, hi in zip(y_lower, y_upper)],
                dtype=torch.float64,
            )
            cells.append(
                CoverCell(
                    box=AxisBox(x_lower, x_upper, y_lower, y_upper),
                    center=types.CCPoint(x=a, y=b),
                )
            )

    # Certify overlap bounds on a witness grid
    witnesses = _witness_points(region, witness_per_axis)
    centers = types.CCPoint(
        x=torch.stack([c.center.x for c in cells]),
        y=torch.stack([c.center.y for c in cells]),
    )
    overlap_bounds: Dict[float, int] = {}
    for dilation in dilations:
        worst = 0
        for start in range(0, witnesses.x.shape[0], 1024):
            query = types.CCPoint(
                x=witnesses.x[start : start + 1024, None, :],
                y=witnesses.y[start : start + 1024, None, :],
            )
            distances = cc_distance(query, types.CCPoint(x=centers.x[None], y=centers.y[None]))
            counts = torch.sum(distances < dilation * R, dim=1)
            worst = max(worst, int(torch.max(counts)))
        if worst > overlap_ceiling:
            raise CoverCertificationError(
                f"Overlap count {worst} for dilation {dilation} exceeds ceiling"
                f" {overlap_ceiling}."
            )
        overlap_bounds[float(dilation)] = worst

    return Cover(
        region=region, radius=R, cells=tuple(cells), overlap_bounds=overlap_bounds
    )


def y_slab_decompose(
    cell: CoverCell,
    ell: int,
    iota: int,
    *,
    constant: float = 9.0,
) -> List[CoverCell]:
    """Split a cell along the second layer into slabs adapted to `R_ell = 2^ell R`,
    where `R = 2^iota`.

    Subcells have second layer cubes with half-diagonal at most `C R_ell / 2`, so each
    lies in `B_R(a_n) x B_{C R_ell}(b_m)`, and their centers are more than `R_ell / 2`
    apart. Their number is of order `(R^2 / R_ell)^{d2} = 2^{(iota - ell) d2}` for
    cells inside the box hull of `B_R(a_n, b_n)`.

    Args:
        cell (CoverCell): Cell with center `(a_n, b_n)`, `|a_n| <= 4R`.
        ell (int): Slab level in `[0, iota]`.
        iota (int): Scale exponent, `R = 2^iota`.

    Keyword Args:
        constant (float, optional): Hull constant `C`. Defaults to 9.

    Returns:
        List[CoverCell]: Disjoint subcells whose union is `cell`.
    """
    if ell < 0 or ell > iota:
        raise ValueError(f"Slab level must lie in [0, {iota}], got {ell}.")
    R = 2.0 ** iota
    a_norm = float(torch.linalg.norm(torch.as_tensor(cell.center.x)))
    if a_norm > 4.0 * R:
        raise ValueError(f"Slab decomposition needs |a_n| <= 4R, got |a_n|={a_norm}.")

    R_ell = 2.0 ** ell * R
    d2 = cell.box.d2
    side = 2.0 * constant * R_ell / math.sqrt(d2) / 2.0

    subcells: List[CoverCell] = []
    for y_lower, y_upper in _grid_boxes(cell.box.y_lower, cell.box.y_upper, side):
        b = torch.tensor(
            [0.5 * (lo + hi) for lo, hi in zip(y_lower, y_upper)], dtype=torch.float64
        )
        subcells.append(
            CoverCell(
                box=AxisBox(cell.box.x_lower, cell.box.x_upper, y_lower, y_upper),
                center=types.CCPoint(x=torch.as_tensor(cell.center.x), y=b),
            )
        )
    return subcells


def hull_cell(ball: types.Ball, *, constant: float = 9.0) -> CoverCell:
    """Axis-aligned cell spanning the box hull of a ball, centered at the ball center.
    Useful as input to `y_slab_decompose` when the slab count should be measured
    against the full second layer extent `C R^2`."""
    hull = box_hull(ball, constant=constant)
    a = hull.x_center
    b = hull.y_center
    return CoverCell(
        box=AxisBox(
            tuple(float(v) - hull.x_radius for v in a),
            tuple(float(v) + hull.x_radius for v in a),
            tuple(float(v) - hull.y_radius for v in b),
            tuple(float(v) + hull.y_radius for v in b),
        ),
        center=types.CCPoint(x=a, y=b),
    )
