from ._finite_differences import laplacian, second_difference
from ._tensor_products import composition_sum, contract_axes

__all__ = [
    "composition_sum",
    "contract_axes",
    "laplacian",
    "second_difference",
]
