from ._cover import (
    AxisBox,
    Cover,
    CoverCell,
    CoverCertificationError,
    cover,
    hull_cell,
    y_slab_decompose,
)
from ._metric import (
    EuclideanBox,
    ball_volume,
    box_hull,
    cc_distance,
    cc_distance_to_set,
    critical_exponent,
    dilate,
    homogeneous_dimension,
    topological_dimension,
)

__all__ = [
    "AxisBox",
    "Cover",
    "CoverCell",
    "CoverCertificationError",
    "EuclideanBox",
    "ball_volume",
    "box_hull",
    "cc_distance",
    "cc_distance_to_set",
    "cover",
    "critical_exponent",
    "dilate",
    "homogeneous_dimension",
    "hull_cell",
    "topological_dimension",
    "y_slab_decompose",
]
