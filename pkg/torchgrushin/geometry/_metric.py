"""Private module; avoid importing from directly.
"""

from typing import NamedTuple

import torch

from .. import types


def homogeneous_dimension(d1: int, d2: int) -> int:
    """Homogeneous dimension `Q = d1 + 2 d2`, which governs large-scale ball growth."""
    return d1 + 2 * d2


def topological_dimension(d1: int, d2: int) -> int:
    """Topological dimension `d = d1 + d2`."""
    return d1 + d2


def critical_exponent(d1: int, d2: int) -> float:
    """Upper end `p_{d1,d2} = min{2 d1 / (d1 + 2), 2 (d2 + 1) / (d2 + 3)}` of the
    range of exponents covered by the truncated restriction estimates."""
    return min(2.0 * d1 / (d1 + 2.0), 2.0 * (d2 + 1.0) / (d2 + 3.0))


def cc_distance(z: types.CCPoint, w: types.CCPoint) -> torch.Tensor:
    """Two-case comparison function for the Carnot-Caratheodory distance.

    Returns `|x - a| + |y - b| / (|x| + |a|)` when `|y - b|^{1/2} < |x| + |a|`, and
    `|x - a| + |y - b|^{1/2}` otherwise. This is equivalent to the true distance up to
    absolute constants; it is a quasi-metric and does not satisfy the triangle
    inequality.

    Args:
        z (CCPoint): Points `(x, y)`, batch shape broadcastable against `w`.
        w (CCPoint): Points `(a, b)`.

    Returns:
        torch.Tensor: Nonnegative distances with the broadcast batch shape.
    """
    x = torch.as_tensor(z.x, dtype=torch.float64)
    y = torch.as_tensor(z.y, dtype=torch.float64)
    a = torch.as_tensor(w.x, dtype=torch.float64)
    b = torch.as_tensor(w.y, dtype=torch.float64)

    horizontal = torch.linalg.norm(x - a, dim=-1)
    vertical = torch.linalg.norm(y - b, dim=-1)
    layer_sum = torch.linalg.norm(x, dim=-1) + torch.linalg.norm(a, dim=-1)
    root_vertical = torch.sqrt(vertical)

    # Ties go to the second branch
    first_branch = root_vertical < layer_sum
    safe_sum = torch.where(first_branch, layer_sum, torch.ones_like(layer_sum))
    return horizontal + torch.where(first_branch, vertical / safe_sum, root_vertical)


def cc_distance_to_set(
    points: types.CCPoint, set_points: types.CCPoint, *, chunk_size: int = 4096
) -> torch.Tensor:
    """Smallest comparison distance from each point to a finite set of points.

    Args:
        points (CCPoint): Query points, flat batch `(N, d1)` / `(N, d2)`.
        set_points (CCPoint): Set samples, flat batch `(M, d1)` / `(M, d2)`.

    Keyword Args:
        chunk_size (int, optional): Query points processed at once.

    Returns:
        torch.Tensor: Shape `(N,)`. Infinite if the set is empty.
    """
    N = points.x.shape[0]
    M = set_points.x.shape[0]
    if M == 0:
        return torch.full((N,), float("inf"), dtype=torch.float64)

    output = torch.empty((N,), dtype=torch.float64)
    for start in range(0, N, chunk_size):
        stop = min(start + chunk_size, N)
        query = types.CCPoint(
            x=points.x[start:stop, None, :], y=points.y[start:stop, None, :]
        )
        target = types.CCPoint(x=set_points.x[None, :, :], y=set_points.y[None, :, :])
        output[start:stop] = torch.min(cc_distance(query, target), dim=1).values
    return output


def dilate(t: float, z: types.CCPoint) -> types.CCPoint:
    """Anisotropic dilation `delta_t(x, y) = (t x, t^2 y)`.

    Args:
        t (float): Dilation factor. Must be positive.
        z (CCPoint): Points.

    Returns:
        CCPoint: Dilated points.
    """
    if not t > 0.0:
        raise ValueError(f"Dilation factor must be positive, got {t}.")
    return types.CCPoint(
        x=t * torch.as_tensor(z.x, dtype=torch.float64),
        y=(t * t) * torch.as_tensor(z.y, dtype=torch.float64),
    )


def ball_volume(R: float, a: torch.Tensor, d2: int) -> float:
    """Comparison representative `R^{d1 + d2} max{R, |a|}^{d2}` of the Lebesgue
    measure of the ball `B_R(a, b)`.

    Args:
        R (float): Radius. Must be positive.
        a (torch.Tensor): First layer of the center, shape `(d1,)`.
        d2 (int): Second layer dimension.

    Returns:
        float: Volume representative.
    """
    if not R > 0.0:
        raise ValueError(f"Radius must be positive, got {R}.")
    a = torch.as_tensor(a, dtype=torch.float64).reshape(-1)
    d1 = a.shape[0]
    return float(R ** (d1 + d2) * max(R, float(torch.linalg.norm(a))) ** d2)


class EuclideanBox(NamedTuple):
    """Product `B_{x_radius}(x_center) x B_{y_radius}(y_center)` of Euclidean balls."""

    x_center: torch.Tensor
    x_radius: float
    y_center: torch.Tensor
    y_radius: float

    def contains(self, z: types.CCPoint) -> torch.Tensor:
        """Boolean mask of points inside the (closed) product."""
        x = torch.as_tensor(z.x, dtype=torch.float64)
        y = torch.as_tensor(z.y, dtype=torch.float64)
        return (torch.linalg.norm(x - self.x_center, dim=-1) <= self.x_radius) & (
            torch.linalg.norm(y - self.y_center, dim=-1) <= self.y_radius
        )


def box_hull(ball: types.Ball, *, constant: float = 9.0) -> EuclideanBox:
    """Euclidean product box `B_R(a) x B_{C R^2}(b)` containing the ball `B_R(a, b)`.

    Only asserted in the regime `R >= |a| / 4`.

    Args:
        ball (Ball): Comparison ball.

    Keyword Args:
        constant (float, optional): The constant `C`. Defaults to 9.

    Returns:
        EuclideanBox: Hull.
    """
    R = ball.radius
    a_norm = float(torch.linalg.norm(ball.a))
    if R < a_norm / 4.0:
        raise ValueError(
            f"Box hull requires R >= |a| / 4, got R={R} and |a|={a_norm}."
        )
    return EuclideanBox(
        x_center=ball.a, x_radius=R, y_center=ball.b, y_radius=constant * R ** 2
    )
