import math

import hypothesis
import pytest
import torch
from hypothesis import strategies as st

import torchgrushin
from torchgrushin import hermite, types

def test_hermite_1d_closed_forms():
    """Check the first Hermite functions against their closed forms."""
    assert float(hermite.hermite_1d(0, 0.0)) == pytest.approx(math.pi ** -0.25)
    assert float(hermite.hermite_1d(0, 0.0)) == pytest.approx(0.751126, abs=1e-6)
    assert float(hermite.hermite_1d(1, 1.0)) == pytest.approx(0.644289, abs=1e-6)

    u = torch.linspace(-3.0, 3.0, 13, dtype=torch.float64)
    expected = math.pi ** -0.25 * (2.0 * u ** 2 - 1.0) / math.sqrt(2.0) * torch.exp(-0.5 * u ** 2)
    torch.testing.assert_close(hermite.hermite_1d(2, u), expected)

def test_hermite_1d_matches_table():
    """The single-degree recurrence is the last row of the table."""
    u = torch.linspace(-8.0, 8.0, 101, dtype=torch.float64)
    table = hermite.hermite_table(30, u)
    assert table.shape == (31, 101)
    torch.testing.assert_close(hermite.hermite_1d(30, u), table[-1])

def test_hermite_1d_large_degree_normalized():
    """Degree 2000 keeps unit norm on a grid reaching past its turning point."""
    u = torch.linspace(-80.0, 80.0, 160_001, dtype=torch.float64)
    values = hermite.hermite_1d(2000, u)
    du = float(u[1] - u[0])
    assert float(torch.sum(values ** 2) * du) == pytest.approx(1.0, abs=1e-6)

    # Turning point is near 63.2; the function still oscillates at 50.
    window = hermite.hermite_1d(2000, torch.linspace(49.9, 50.1, 41, dtype=torch.float64))
    assert float(window.abs().max()) > 0.05

def test_hermite_1d_large_degree_at_origin():
    """`h_{2m}(0) = pi^{-1/4} (-1)^m sqrt((2m)!) / (2^m m!)` at degree `10^4`."""
    m = 5000
    log_magnitude = (
        -0.25 * math.log(math.pi)
        + 0.5 * math.lgamma(2 * m + 1)
        - m * math.log(2.0)
        - math.lgamma(m + 1)
    )
    value = float(hermite.hermite_1d(2 * m, 0.0))
    assert value == pytest.approx(math.exp(log_magnitude), rel=1e-8)

    u = torch.tensor([50.0, 100.0], dtype=torch.float64)
    values = hermite.hermite_1d(2 * m, u)
    assert torch.all(torch.isfinite(values))
    assert torch.all(values != 0.0)

def test_hermite_1d_rejects_negative_degree():
    """Negative degrees are rejected."""
    with pytest.raises(ValueError):
        hermite.hermite_1d(-1, 0.0)

def test_gram_residual():
    """Sampled tensor-product Hermite functions are orthonormal under quadrature."""
    for d1 in (1, 2):
        plan = hermite.default_plan(d1, 16)
        assert hermite.gram_residual(plan) <= 1e-8

@hypothesis.given(d1=st.integers(min_value=1, max_value=3))
def test_scaled_hermite_ground_state(d1: int):
    """Ground state at the origin equals `pi^{-d1/4}`."""
    nu = types.MultiIndex((0,) * d1)
    value = hermite.scaled_hermite(nu, 1.0, torch.zeros(d1, dtype=torch.float64))
    assert float(value) == pytest.approx(math.pi ** (-d1 / 4.0))

@hypothesis.given(
    entries=st.lists(st.integers(min_value=0, max_value=6), min_size=1, max_size=3),
    x=st.floats(min_value=-2.0, max_value=2.0),
)
def test_scaled_hermite_scaling(entries, x: float):
    """`Phi_nu^eta(x) = |eta|^{d1/4} Phi_nu(|eta|^{1/2} x)` at `|eta| = 4`."""
    nu = types.MultiIndex(tuple(entries))
    point = torch.full((nu.d1,), x, dtype=torch.float64)
    scaled = hermite.scaled_hermite(nu, 4.0, point)
    expected = 4.0 ** (nu.d1 / 4.0) * hermite.scaled_hermite(nu, 1.0, 2.0 * point)
    torch.testing.assert_close(scaled, expected)

def test_scaled_hermite_rejects_nonpositive_r():
    """`r <= 0` is rejected."""
    with pytest.raises(ValueError):
        hermite.scaled_hermite(types.MultiIndex((0,)), 0.0, torch.zeros(1))

def test_scaled_hermite_normalized():
    """Scaled Hermite functions have unit norm for any frequency."""
    plan = hermite.default_plan(1, 8, r=0.5)
    for r in (0.5, 1.0, 3.0):
        phi = hermite.scaled_hermite(types.MultiIndex((5,)), r, plan.points)
        norm_squared = plan.cell_volume * float(torch.sum(phi ** 2))
        assert norm_squared == pytest.approx(1.0, abs=1e-8)

def test_eigenspace_dim():
    """Eigenspace dimensions count multi-indices."""
    assert hermite.eigenspace_dim(0, 4) == 1
    assert hermite.eigenspace_dim(7, 1) == 1
    assert hermite.eigenspace_dim(2, 3) == 6
    for k in range(5):
        for d1 in (1, 2, 3):
            nus = hermite.multi_indices(k, d1)
            assert len(nus) == hermite.eigenspace_dim(k, d1)
            assert all(nu.length_1 == k for nu in nus)
            assert len({nu.entries for nu in nus}) == len(nus)

def test_eigen_index_bracket():
    """`[k] = 2k + d1`."""
    assert types.EigenIndex(k=3, d1=2).bracket == 8
    with pytest.raises(ValueError):
        types.EigenIndex(k=-1, d1=2)

@hypothesis.given(
    k=st.integers(min_value=0, max_value=6),
    r=st.floats(min_value=0.25, max_value=4.0),
)
def test_projection_kernel_symmetry_and_scaling(k: int, r: float):
    """Kernels are symmetric and covariant under frequency scaling."""
    torch.random.manual_seed(0)
    index = types.EigenIndex(k=k, d1=2)
    x = torch.randn((5, 2), dtype=torch.float64)
    a = torch.randn((5, 2), dtype=torch.float64)
    forward = hermite.projection_kernel(index, r, x, a)
    torch.testing.assert_close(forward, hermite.projection_kernel(index, r, a, x))

    root = math.sqrt(r)
    unscaled = hermite.projection_kernel(index, 1.0, root * x, root * a)
    torch.testing.assert_close(forward, r ** (index.d1 / 2.0) * unscaled)

def test_projection_kernel_ground_state():
    """The `k = 0` kernel is a product of Gaussians."""
    torch.random.manual_seed(0)
    x = torch.randn((4, 2), dtype=torch.float64)
    a = torch.randn((4, 2), dtype=torch.float64)
    kernel = hermite.projection_kernel(types.EigenIndex(k=0, d1=2), 1.0, x, a)
    expected = math.pi ** -1.0 * torch.exp(
        -0.5 * (torch.sum(x ** 2, dim=-1) + torch.sum(a ** 2, dim=-1))
    )
    torch.testing.assert_close(kernel, expected)

def test_projection_kernel_matches_enumeration():
    """The kernel equals the explicit sum over the eigenspace."""
    torch.random.manual_seed(0)
    x = torch.randn((3, 3), dtype=torch.float64)
    a = torch.randn((3, 3), dtype=torch.float64)
    k, r = 3, 1.7
    expected = sum(
        hermite.scaled_hermite(nu, r, x) * hermite.scaled_hermite(nu, r, a)
        for nu in hermite.multi_indices(k, 3)
    )
    kernel = hermite.projection_kernel(types.EigenIndex(k=k, d1=3), r, x, a)
    torch.testing.assert_close(kernel, expected)

def test_diag_kernel_trace_and_bound():
    """Trace identity and Cauchy-Schwarz bound of the kernel diagonal."""
    plan = hermite.default_plan(2, 10)
    points = plan.points
    assert float(hermite.diag_kernel(types.EigenIndex(k=0, d1=2), 1.0, torch.zeros(2))) == (
        pytest.approx(1.0 / math.pi)
    )
    for k in (0, 3, 10):
        index = types.EigenIndex(k=k, d1=2)
        trace = plan.cell_volume * float(torch.sum(hermite.diag_kernel(index, 1.0, points)))
        assert trace == pytest.approx(hermite.eigenspace_dim(k, 2), rel=1e-6)

    torch.random.manual_seed(0)
    x = torch.randn((10, 2), dtype=torch.float64)
    a = torch.randn((10, 2), dtype=torch.float64)
    index = types.EigenIndex(k=4, d1=2)
    bound = torch.sqrt(
        hermite.diag_kernel(index, 1.0, x) * hermite.diag_kernel(index, 1.0, a)
    )
    kernel = hermite.projection_kernel(index, 1.0, x, a)
    assert torch.all(torch.abs(kernel) <= bound * (1.0 + 1e-10) + 1e-14)

def test_project_algebra():
    """Projections are idempotent, mutually orthogonal and fix their eigenfunctions."""
    plan = hermite.default_plan(2, 8, r=2.0)
    points = plan.points
    r = 2.0

    phi = hermite.scaled_hermite(types.MultiIndex((2, 1)), r, points)
    three = types.EigenIndex(k=3, d1=2)
    two = types.EigenIndex(k=2, d1=2)
    torch.testing.assert_close(hermite.project(three, r, phi, plan), phi, atol=1e-8, rtol=0.0)
    assert float(torch.max(torch.abs(hermite.project(two, r, phi, plan)))) < 1e-8

    torch.random.manual_seed(0)
    g = torch.randn((2,) + points.shape[:-1], dtype=torch.float64)
    once = hermite.project(three, r, g, plan)
    torch.testing.assert_close(hermite.project(three, r, once, plan), once)
    assert float(torch.max(torch.abs(hermite.project(two, r, once, plan)))) < 1e-10

def test_project_rejects_bad_inputs():
    """`r <= 0` is rejected."""
    plan = hermite.default_plan(1, 4)
    with pytest.raises(ValueError):
        hermite.project(types.EigenIndex(k=1, d1=1), 0.0, torch.zeros(plan.n_x), plan)

def test_eigen_residual_convergence():
    """Finite-difference eigen-residuals shrink under grid refinement."""
    plan = hermite.default_plan(2, 6)
    nu = types.MultiIndex((2, 1))
    coarse = hermite.eigen_residual(nu, 1.0, plan)
    fine = hermite.eigen_residual(nu, 1.0, plan.refined(2))
    assert coarse / fine >= 4.0

def test_hermite_basis_orthonormal():
    """Orthonormalized bases are exactly orthonormal and close to the raw samples."""
    plan = hermite.default_plan(1, 12)
    r = torch.tensor([0.5, 1.0, 2.0], dtype=torch.float64)
    basis = hermite.hermite_basis(plan, r)
    assert basis.shape == (3, plan.n_x, 13)
    gram = plan.step * basis.transpose(-1, -2) @ basis
    torch.testing.assert_close(gram, torch.eye(13, dtype=torch.float64).expand(3, 13, 13))

    raw = hermite.hermite_basis(plan, 1.0, orthonormalize=False)
    torch.testing.assert_close(basis[1], raw, atol=1e-6, rtol=0.0)

def test_default_plan_turning_point():
    """The highest retained turning point lies inside the inner half of the grid."""
    for k_max, r in ((4, 1.0), (20, 0.5), (12, 3.0)):
        plan = hermite.default_plan(2, k_max, r)
        assert math.sqrt(2 * k_max + 1) / math.sqrt(r) <= plan.x_extent / 2.0 + 1e-12
        assert plan.n_x >= k_max + 1
    with pytest.raises(ValueError):
        torchgrushin.hermite.HermiteEvalPlan(d1=1, k_max=10, x_extent=1.0, n_x=4)
