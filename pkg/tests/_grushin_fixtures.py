import pytest
import torch

import torchgrushin
from torchgrushin import types
from torchgrushin.calculus import GridFunction, GridSpec


@pytest.fixture
def spec_1_1() -> GridSpec:
    """Small `d1 = d2 = 1` grid with every eigenspace of the x-axis retained."""
    return GridSpec(d1=1, d2=1, x_extent=8.0, y_extent=16.0, n_x=32, n_y=32, k_max=31)


@pytest.fixture
def spec_2_1() -> GridSpec:
    """Small `d1 = 2, d2 = 1` grid."""
    return GridSpec(d1=2, d2=1, x_extent=6.0, y_extent=12.0, n_x=16, n_y=16, k_max=15)


@pytest.fixture
def bump_1_1(spec_1_1: GridSpec) -> GridFunction:
    """Compactly supported smooth function centered at the origin."""
    return torchgrushin.cli.compact_bump(spec_1_1, x_radius=3.0, y_radius=6.0)


@pytest.fixture
def noise_1_1(spec_1_1: GridSpec) -> GridFunction:
    """Batch of three complex Gaussian noise samples."""
    torch.random.manual_seed(0)
    values = torch.randn((3,) + spec_1_1.shape, dtype=torch.complex128)
    return GridFunction(spec=spec_1_1, values=values)


def origin(spec: GridSpec) -> types.CCPoint:
    return types.CCPoint(
        x=torch.zeros(spec.d1, dtype=torch.float64),
        y=torch.zeros(spec.d2, dtype=torch.float64),
    )
