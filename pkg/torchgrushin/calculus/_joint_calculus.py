"""Private module; avoid importing from directly.
"""

import dataclasses
import functools
from typing import Optional, Tuple

import torch

from .. import types, utils
from ..hermite import degree_grid, hermite_basis
from ._fourier import fourier_y, inverse_fourier_y
from ._grid import GridFunction, GridSpec
from ._symbols import JointSymbol, Symbol1D, cosine_symbol, from_multiplier


class TruncationError(RuntimeError):
    """Raised when the energy outside the retained Hermite eigenspaces exceeds the
    configured tolerance."""


class JointCalculus:
    """Discrete joint functional calculus of `(L, T)` on a fixed grid.

    For every nonzero grid frequency `eta`, the slice `f^eta` is expanded in the sampled
    scaled Hermite basis for `r = |eta|`; the component with `|nu|_1 = k` is an
    eigenvector of `L^eta` with eigenvalue `[k] |eta|`, and `G(L, T)` multiplies it by
    `G([k] |eta|, |eta|)`. Only multi-indices with `|nu|_1 <= k_max` are retained.

    On the `eta = 0` plane, `L^0 = -Delta_x` has continuous spectrum; it is diagonalized
    by an FFT along the x-axes, and the plane is multiplied by `G(|xi|^2, 0)`.

    Instances hold the per-frequency bases for their grid; use `joint_calculus()` to
    get a cached one.

    Args:
        spec (GridSpec): Grid.
    """

    def __init__(self, spec: GridSpec):
        self.spec = spec
        """GridSpec: Grid this engine operates on."""
        self.plan = spec.hermite_plan()

        magnitudes = spec.eta_magnitudes.reshape(-1)
        self._zero_plane: int = int(torch.argmin(magnitudes))
        assert float(magnitudes[self._zero_plane]) == 0.0
        self._nonzero = torch.nonzero(magnitudes > 0.0).squeeze(-1)

        self.r: torch.Tensor = magnitudes[self._nonzero]
        """torch.Tensor: Nonzero frequency magnitudes, shape `(E,)`."""
        self.basis: torch.Tensor = hermite_basis(self.plan, self.r)
        """torch.Tensor: Orthonormalized one-dimensional bases, shape
        `(E, n_x, k_max + 1)`."""

        degrees = degree_grid(spec.d1, spec.k_max)
        self.retained: torch.Tensor = degrees <= spec.k_max
        """torch.Tensor: Mask of multi-indices with `|nu|_1 <= k_max`."""
        self.brackets: torch.Tensor = (2 * degrees + spec.d1).to(torch.float64)
        """torch.Tensor: `[|nu|_1]` over the coefficient grid."""

        xi = spec.xi_axis
        xi_squared = torch.zeros(spec.x_shape, dtype=torch.float64)
        for j in range(spec.d1):
            shape = [1] * spec.d1
            shape[j] = spec.n_x
            xi_squared = xi_squared + (xi ** 2).reshape(shape)
        self._xi_squared = xi_squared

    # Layout helpers: (*batch, *x_shape, *y_shape) <-> (*batch, E_all, *x_shape)

    def _planes(self, spectrum: torch.Tensor) -> torch.Tensor:
        spec = self.spec
        batch = spectrum.shape[: -spec.ndim]
        flat = spectrum.reshape(batch + spec.x_shape + (-1,))
        return torch.movedim(flat, -1, len(batch))

    def _unplanes(self, planes: torch.Tensor) -> torch.Tensor:
        spec = self.spec
        batch = planes.shape[: -spec.d1 - 1]
        flat = torch.movedim(planes, len(batch), -1)
        return flat.reshape(batch + spec.shape)

    def coefficients(self, planes: torch.Tensor) -> torch.Tensor:
        """Hermite coefficients of the nonzero-frequency planes.

        Args:
            planes (torch.Tensor): Shape `(*batch, E_all, n_x, ..., n_x)`.

        Returns:
            torch.Tensor: Shape `(*batch, E, k_max + 1, ..., k_max + 1)`.
        """
        nonzero = planes.index_select(planes.dim() - self.spec.d1 - 1, self._nonzero)
        return self.plan.cell_volume * utils.contract_axes(
            nonzero, self.basis, self.spec.d1
        )

    def synthesize(self, coefficients: torch.Tensor) -> torch.Tensor:
        """Inverse of `coefficients()` on the retained span."""
        return utils.contract_axes(
            coefficients, self.basis.transpose(-1, -2), self.spec.d1
        )

    def multiplier(self, G: JointSymbol) -> torch.Tensor:
        """`G([|nu|_1] r, r)` over `(E, k_max + 1, ..., k_max + 1)`, masked to the
        retained multi-indices."""
        r = self.r.reshape((-1,) + (1,) * self.spec.d1)
        values = G(self.brackets[None] * r, r)
        values = torch.broadcast_to(values, (self.r.shape[0],) + self.brackets.shape)
        return values * self.retained.to(values.dtype)

    def zero_plane_multiplier(self, G: JointSymbol) -> Optional[torch.Tensor]:
        """`G(|xi|^2, 0)` over the x-frequency grid, or None if the symbol vanishes on
        the `eta = 0` plane."""
        if G.vanishes_at_zero:
            return None
        values = G(self._xi_squared, torch.zeros((), dtype=torch.float64))
        return torch.broadcast_to(values, self._xi_squared.shape)

    def apply(self, G: JointSymbol, spectrum: torch.Tensor) -> torch.Tensor:
        """Apply `G(L, T)` to a y-spectrum with layout `(*batch, *spec.shape)`."""
        spec = self.spec
        planes = self._planes(spectrum)
        e_dim = planes.dim() - spec.d1 - 1
        out = torch.zeros_like(planes)

        coefficients = self.coefficients(planes)
        out.index_copy_(
            e_dim, self._nonzero, self.synthesize(coefficients * self.multiplier(G))
        )

        zero_multiplier = self.zero_plane_multiplier(G)
        if zero_multiplier is not None:
            x_dims = tuple(range(-spec.d1, 0))
            plane = planes.select(e_dim, self._zero_plane)
            filtered = torch.fft.ifftn(
                torch.fft.fftn(plane, dim=x_dims) * zero_multiplier, dim=x_dims
            )
            out.select(e_dim, self._zero_plane).copy_(filtered)
        return self._unplanes(out)

    def tail(self, spectrum: torch.Tensor) -> torch.Tensor:
        """Per-frequency `L^2` norms of the component outside the retained span, with
        layout `(*batch, *y_shape)`; zero on the `eta = 0` plane."""
        spec = self.spec
        planes = self._planes(spectrum)
        e_dim = planes.dim() - spec.d1 - 1
        x_dims = tuple(range(-spec.d1, 0))

        coefficients = self.coefficients(planes) * self.retained.to(planes.dtype)
        retained = self.synthesize(coefficients)
        nonzero = planes.index_select(e_dim, self._nonzero)
        residual = self.plan.cell_volume * torch.sum(
            torch.abs(nonzero - retained) ** 2, dim=x_dims
        )

        tail = torch.zeros(planes.shape[: e_dim + 1], dtype=torch.float64)
        tail.index_copy_(e_dim, self._nonzero, torch.sqrt(residual))
        return tail.reshape(planes.shape[:e_dim] + spec.y_shape)

    def spectral_energy(self, G: JointSymbol, spectrum: torch.Tensor) -> torch.Tensor:
        """`sum_k int ||G([k] |eta|, |eta|) P_k^eta f^eta||^2`, from coefficients."""
        spec = self.spec
        planes = self._planes(spectrum)
        e_dim = planes.dim() - spec.d1 - 1
        coefficient_dims = tuple(range(e_dim, planes.dim()))

        weighted = self.coefficients(planes) * self.multiplier(G)
        energy = torch.sum(torch.abs(weighted) ** 2, dim=coefficient_dims)

        zero_multiplier = self.zero_plane_multiplier(G)
        if zero_multiplier is not None:
            x_dims = tuple(range(-spec.d1, 0))
            plane = planes.select(e_dim, self._zero_plane)
            transformed = torch.fft.fftn(plane, dim=x_dims) * zero_multiplier
            energy = energy + (
                self.plan.cell_volume
                / spec.n_x ** spec.d1
                * torch.sum(torch.abs(transformed) ** 2, dim=x_dims)
            )
        return spec.frequency_weight * energy


@functools.lru_cache(maxsize=8)
def joint_calculus(spec: GridSpec) -> JointCalculus:
    """Cached `JointCalculus` for a grid."""
    return JointCalculus(spec)


def _engine(spec: GridSpec, k_max: Optional[int]) -> JointCalculus:
    if k_max is not None and k_max != spec.k_max:
        spec = dataclasses.replace(spec, k_max=k_max)
    return joint_calculus(spec)


def _spectrum(f: GridFunction) -> torch.Tensor:
    return f.values if f.frequency else fourier_y(f).values


def _relative_tail(engine: JointCalculus, spectrum: torch.Tensor) -> torch.Tensor:
    spec = engine.spec
    tail = engine.tail(spectrum)
    y_dims = tuple(range(-spec.d2, 0))
    x_dims = tuple(range(-spec.ndim, -spec.d2))
    tail_energy = spec.frequency_weight * torch.sum(tail ** 2, dim=y_dims)
    total_energy = spec.frequency_weight * spec.x_cell_volume * torch.sum(
        torch.abs(spectrum) ** 2, dim=x_dims + y_dims
    )
    safe = torch.where(total_energy > 0.0, total_energy, torch.ones_like(total_energy))
    return torch.where(
        total_energy > 0.0, torch.sqrt(tail_energy / safe), torch.zeros_like(safe)
    )


def truncation_tail(
    f: GridFunction, *, k_max: Optional[int] = None
) -> Tuple[torch.Tensor, torch.Tensor]:
    """Energy of `f^eta` outside the retained eigenspaces.

    Args:
        f (GridFunction): Samples in either domain.

    Keyword Args:
        k_max (int, optional): Overrides `f.spec.k_max`.

    Returns:
        Tuple[torch.Tensor, torch.Tensor]: Per-frequency tails
        `||f^eta - sum_{k <= k_max} P_k^eta f^eta||_2`, shape `(*batch, *y_shape)` in FFT
        order, and the relative tail `||tail||_2 / ||f||_2`, shape `(*batch,)`.
    """
    engine = _engine(f.spec, k_max)
    spectrum = _spectrum(f)
    return engine.tail(spectrum), _relative_tail(engine, spectrum)


def apply_joint(
    G: JointSymbol,
    f: GridFunction,
    *,
    k_max: Optional[int] = None,
    tail_tolerance: Optional[float] = None,
) -> GridFunction:
    """Apply `G(L, T)` via `(G(L, T) f)^eta = G(L^eta, |eta|) f^eta`.

    Args:
        G (JointSymbol): Joint symbol.
        f (GridFunction): Samples in either domain; the result is returned in the same
            domain.

    Keyword Args:
        k_max (int, optional): Overrides `f.spec.k_max`.
        tail_tolerance (float, optional): Largest acceptable relative truncation tail;
            `TruncationError` is raised above it. Unchecked when None.

    Returns:
        GridFunction: `G(L, T) f`.
    """
    engine = _engine(f.spec, k_max)
    spectrum = _spectrum(f)

    if tail_tolerance is not None:
        relative = _relative_tail(engine, spectrum)
        worst = float(torch.max(relative)) if relative.numel() > 0 else 0.0
        if worst > tail_tolerance:
            raise TruncationError(
                f"Relative truncation tail {worst:.3e} exceeds tolerance"
                f" {tail_tolerance:.3e} at k_max={engine.spec.k_max}."
            )

    out = GridFunction(spec=f.spec, values=engine.apply(G, spectrum), frequency=True)
    return out if f.frequency else inverse_fourier_y(out)


def apply_multiplier(
    F: Symbol1D,
    f: GridFunction,
    *,
    k_max: Optional[int] = None,
    tail_tolerance: Optional[float] = None,
) -> GridFunction:
    """Apply `F(sqrt(L))`, i.e. `apply_joint()` with `G(lambda, r) = F(sqrt(lambda))`."""
    return apply_joint(
        from_multiplier(F), f, k_max=k_max, tail_tolerance=tail_tolerance
    )


def plancherel_spectral_sum(
    G: JointSymbol, f: GridFunction, *, k_max: Optional[int] = None
) -> torch.Tensor:
    """Spectral side `sum_k int ||G([k] |eta|, |eta|) P_k^eta f^eta||_2^2 d eta` of
    the Plancherel identity for `||G(L, T) f||_2^2`, computed from Hermite coefficients
    without synthesizing `G(L, T) f`.

    Returns:
        torch.Tensor: Squared norms, shape `f.batch_shape`.
    """
    engine = _engine(f.spec, k_max)
    return engine.spectral_energy(G, _spectrum(f))


def integral_kernel(
    G: JointSymbol,
    center: types.CCPoint,
    spec: GridSpec,
    *,
    k_max: Optional[int] = None,
) -> GridFunction:
    """Kernel column `K_{G(L, T)}(., (a, b))`, the response of `G(L, T)` to a
    unit-mass delta at the grid point nearest to `(a, b)`.

    Args:
        G (JointSymbol): Joint symbol.
        center (CCPoint): Kernel pole `(a, b)`.
        spec (GridSpec): Grid.

    Keyword Args:
        k_max (int, optional): Overrides `spec.k_max`.

    Returns:
        GridFunction: Kernel samples.
    """
    return apply_joint(G, grid_delta(spec, center), k_max=k_max)


def grid_delta(spec: GridSpec, center: types.CCPoint) -> GridFunction:
    """Unit-mass delta at the grid point nearest to `center`."""
    delta = torch.zeros(spec.shape, dtype=torch.complex128)
    delta[spec.nearest_index(center)] = 1.0 / spec.cell_volume
    return GridFunction(spec=spec, values=delta)


_L_SYMBOL = JointSymbol(fn=lambda lam, r: lam + 0.0 * r, name="L")


def apply_L(f: GridFunction, *, k_max: Optional[int] = None) -> GridFunction:
    """Apply `L = -Delta_x - |x|^2 Delta_y` spectrally, `G(lambda, r) = lambda`.

    Args:
        f (GridFunction): Samples in either domain.

    Keyword Args:
        k_max (int, optional): Overrides `f.spec.k_max`.

    Returns:
        GridFunction: `L f`.
    """
    return apply_joint(_L_SYMBOL, f, k_max=k_max)


def apply_L_finite_difference(f: GridFunction) -> GridFunction:
    """Apply `L = -Delta_x - |x|^2 Delta_y` with fourth-order central differences:
    zero padding along the x-axes and periodic wrap along the y-axes.

    Args:
        f (GridFunction): Samples in the space domain.

    Returns:
        GridFunction: `L f`.
    """
    if f.frequency:
        raise ValueError("Finite differences act on the space domain.")
    spec = f.spec
    x_dims = tuple(range(-spec.ndim, -spec.d2))
    y_dims = tuple(range(-spec.d2, 0))

    laplacian_x = utils.laplacian(f.values, dims=x_dims, step=spec.x_step)
    laplacian_y = utils.laplacian(
        f.values, dims=y_dims, step=spec.y_step, periodic=True
    )
    x_squared = torch.sum(spec.x_points ** 2, dim=-1)
    return f.with_values(-laplacian_x - x_squared * laplacian_y)


def cosine_propagate(
    t: float,
    f: GridFunction,
    *,
    k_max: Optional[int] = None,
    tail_tolerance: Optional[float] = None,
) -> GridFunction:
    """Wave propagator `cos(t sqrt(L)) f`; `t = 0` returns an exact copy."""
    if t == 0.0:
        return f.clone()
    return apply_multiplier(
        cosine_symbol(t), f, k_max=k_max, tail_tolerance=tail_tolerance
    )
