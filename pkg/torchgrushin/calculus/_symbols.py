"""Private module; avoid importing from directly.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import fannypack
import numpy as np
import torch

from ._bumps import DyadicBump

ArrayLike = Union[float, torch.Tensor]


def _as_real(lam: ArrayLike) -> torch.Tensor:
    return torch.as_tensor(lam, dtype=torch.float64)


@dataclass(frozen=True)
class Symbol1D:
    """Spectral multiplier `F`, applied to `sqrt(L)`.

    Keyword Args:
        fn (Callable): Evaluation rule, mapping a float64 tensor to values of the same
            shape.
        support (Tuple[float, float]): Declared interval outside of which `F` vanishes.
        name (str): Identifier used in reports.
    """

    fn: Callable[[torch.Tensor], torch.Tensor]
    support: Tuple[float, float]
    name: str = "symbol"

    def __post_init__(self) -> None:
        if not self.support[0] <= self.support[1]:
            raise ValueError(f"Invalid support interval {self.support}.")

    def __call__(self, lam: ArrayLike) -> torch.Tensor:
        lam = _as_real(lam)
        return torch.as_tensor(self.fn(lam)).to(torch.complex128)

    def check_support(self, lam: torch.Tensor, *, atol: float = 1e-12) -> bool:
        """Check on samples that `F` vanishes outside the declared support."""
        lam = _as_real(lam)
        outside = (lam < self.support[0]) | (lam > self.support[1])
        if not torch.any(outside):
            return True
        return bool(torch.max(torch.abs(self(lam[outside]))) <= atol)

    def sup_norm(self, *, samples: int = 4097) -> float:
        """Largest magnitude on a uniform sample of the support (clipped to a finite
        window for unbounded supports)."""
        lo = max(self.support[0], -1e3)
        hi = min(self.support[1], 1e3)
        lam = torch.linspace(lo, hi, samples, dtype=torch.float64)
        return float(torch.max(torch.abs(self(lam))))

    def scaled(self, t: float) -> "Symbol1D":
        """The dilated symbol `lambda -> F(t lambda)`, `t > 0`."""
        if not t > 0.0:
            raise ValueError(f"Scale must be positive, got {t}.")
        return Symbol1D(
            fn=lambda lam: self.fn(t * lam),
            support=(self.support[0] / t, self.support[1] / t),
            name=f"{self.name}(t={t:g})",
        )

    def conj(self) -> "Symbol1D":
        return Symbol1D(
            fn=lambda lam: torch.conj(torch.as_tensor(self.fn(lam)).to(torch.complex128)),
            support=self.support,
            name=f"conj({self.name})",
        )

    def __mul__(self, other: "Symbol1D") -> "Symbol1D":
        lo = max(self.support[0], other.support[0])
        hi = max(lo, min(self.support[1], other.support[1]))
        return Symbol1D(
            fn=lambda lam: self(lam) * other(lam),
            support=(lo, hi),
            name=f"{self.name}*{other.name}",
        )


@dataclass(frozen=True)
class JointSymbol:
    """Joint symbol `G(lambda, r)`, applied to `(L, |T|)`.

    Keyword Args:
        fn (Callable): Evaluation rule on broadcastable float64 tensors `(lambda, r)`.
        lambda_sup (float): Supremum of the `lambda`-support, used to size the Hermite
            truncation. `inf` when unbounded.
        vanishes_at_zero (bool): Whether `G(lambda, 0) = 0` for every `lambda`, in which
            case the `eta = 0` frequency plane is skipped.
        name (str): Identifier used in reports.
    """

    fn: Callable[[torch.Tensor, torch.Tensor], torch.Tensor]
    lambda_sup: float = math.inf
    vanishes_at_zero: bool = False
    name: str = "joint"

    def __call__(self, lam: ArrayLike, r: ArrayLike) -> torch.Tensor:
        lam = _as_real(lam)
        r = _as_real(r)
        return torch.as_tensor(self.fn(lam, r)).to(torch.complex128)

    def compose(self, other: "JointSymbol") -> "JointSymbol":
        """Pointwise product, i.e. the symbol of `G(L, T) H(L, T)`."""
        return JointSymbol(
            fn=lambda lam, r: self(lam, r) * other(lam, r),
            lambda_sup=min(self.lambda_sup, other.lambda_sup),
            vanishes_at_zero=self.vanishes_at_zero or other.vanishes_at_zero,
            name=f"{self.name}*{other.name}",
        )


def _sqrt_nonneg(lam: torch.Tensor) -> torch.Tensor:
    return torch.sqrt(torch.clamp(lam, min=0.0))


def from_multiplier(F: Symbol1D) -> JointSymbol:
    """Joint symbol `G(lambda, r) = F(sqrt(lambda))`, independent of `r`."""
    return JointSymbol(
        fn=lambda lam, r: F(_sqrt_nonneg(lam)) * torch.ones_like(r),
        lambda_sup=max(F.support[1], 0.0) ** 2,
        vanishes_at_zero=False,
        name=F.name,
    )


def _ratio(lam: torch.Tensor, r: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
    lam, r = torch.broadcast_tensors(lam, r)
    positive = r > 0.0
    safe = torch.where(positive, r, torch.ones_like(r))
    return torch.where(positive, lam / safe, torch.zeros_like(r)), positive


def band_truncate(F: Symbol1D, ell: int, bump: DyadicBump) -> JointSymbol:
    """Band-truncated symbol `G_ell(lambda, r) = F(sqrt(lambda)) chi_ell(lambda / r)`
    for `r != 0`, and `0` for `r = 0`.

    Args:
        F (Symbol1D): Multiplier.
        ell (int): Band index.
        bump (DyadicBump): Partition of unity.

    Returns:
        JointSymbol: Band symbol.
    """

    def fn(lam: torch.Tensor, r: torch.Tensor) -> torch.Tensor:
        ratio, positive = _ratio(lam, r)
        window = torch.where(positive, bump.piece(ell, ratio), torch.zeros_like(ratio))
        return F(_sqrt_nonneg(lam)) * window

    return JointSymbol(
        fn=fn,
        lambda_sup=max(F.support[1], 0.0) ** 2,
        vanishes_at_zero=True,
        name=f"{F.name}[band={ell}]",
    )


def band_tail(F: Symbol1D, iota: int, bump: DyadicBump) -> JointSymbol:
    """Symbol of `sum_{ell > iota} G_ell(L, T)`, i.e.
    `F(sqrt(lambda)) sum_{ell > iota} chi_ell(lambda / r)` for `r != 0`."""

    def fn(lam: torch.Tensor, r: torch.Tensor) -> torch.Tensor:
        ratio, positive = _ratio(lam, r)
        window = torch.where(positive, bump.tail(iota, ratio), torch.zeros_like(ratio))
        return F(_sqrt_nonneg(lam)) * window

    return JointSymbol(
        fn=fn,
        lambda_sup=max(F.support[1], 0.0) ** 2,
        vanishes_at_zero=True,
        name=f"{F.name}[tail>{iota}]",
    )


def first_band(d1: int) -> int:
    """Smallest band index `ell` for which `chi_ell([k])` can be nonzero, given
    `[k] = 2k + d1 >= d1`."""
    if d1 < 1:
        raise ValueError(f"Dimension must be positive, got {d1}.")
    return d1.bit_length() - 1


def dyadic_localizer(bump: DyadicBump, width: int = 2) -> Symbol1D:
    """`psi = sum_{|i| <= width} chi_i`, which equals 1 on
    `[2^{-width}, 2^{width}]` and is supported in `[2^{-width-1}, 2^{width+1}]`."""
    return Symbol1D(
        fn=lambda lam: bump.window(-width, width, lam),
        support=(-(2.0 ** (width + 1)), 2.0 ** (width + 1)),
        name=f"psi(width={width})",
    )


def bochner_riesz(delta: float, t: float) -> Symbol1D:
    """Bochner-Riesz symbol `lambda -> (1 - t lambda^2)_+^delta`, so that
    `F(sqrt(L)) = (1 - t L)_+^delta`. For `delta = 0` this is the indicator of
    `t lambda^2 < 1`."""
    if delta < 0.0:
        raise ValueError(f"Bochner-Riesz order must be nonnegative, got {delta}.")
    if not t > 0.0:
        raise ValueError(f"Bochner-Riesz scale must be positive, got {t}.")

    def fn(lam: torch.Tensor) -> torch.Tensor:
        base = 1.0 - t * lam ** 2
        inside = base > 0.0
        if delta == 0.0:
            return inside.to(torch.float64)
        return torch.where(inside, torch.clamp(base, min=0.0) ** delta, torch.zeros_like(base))

    edge = 1.0 / math.sqrt(t)
    return Symbol1D(fn=fn, support=(-edge, edge), name=f"bochner-riesz(delta={delta:g},t={t:g})")


def cosine_symbol(t: float) -> Symbol1D:
    """Wave propagator symbol `lambda -> cos(t lambda)`."""
    return Symbol1D(
        fn=lambda lam: torch.cos(t * lam),
        support=(-math.inf, math.inf),
        name=f"cosine(t={t:g})",
    )


def indicator(lo: float, hi: float) -> Symbol1D:
    """Indicator of the closed interval `[lo, hi]`."""
    if not lo <= hi:
        raise ValueError(f"Invalid interval [{lo}, {hi}].")
    return Symbol1D(
        fn=lambda lam: ((lam >= lo) & (lam <= hi)).to(torch.float64),
        support=(lo, hi),
        name=f"indicator({lo:g},{hi:g})",
    )


def smooth_bump(lo: float, hi: float) -> Symbol1D:
    """C-infinity bump supported in `[lo, hi]`, equal to 1 at the midpoint."""
    if not lo < hi:
        raise ValueError(f"Invalid interval [{lo}, {hi}].")

    def fn(lam: torch.Tensor) -> torch.Tensor:
        u = (lam - lo) / (hi - lo)
        inside = (u > 0.0) & (u < 1.0)
        safe = torch.where(inside, u * (1.0 - u), torch.ones_like(u))
        return torch.where(inside, torch.exp(4.0 - 1.0 / safe), torch.zeros_like(u))

    return Symbol1D(fn=fn, support=(lo, hi), name=f"bump({lo:g},{hi:g})")


def gaussian(scale: float = 1.0) -> Symbol1D:
    """Gaussian `lambda -> exp(-lambda^2 / (2 scale^2))`; the support is declared at
    12 standard deviations."""
    if not scale > 0.0:
        raise ValueError(f"Scale must be positive, got {scale}.")
    return Symbol1D(
        fn=lambda lam: torch.exp(-0.5 * (lam / scale) ** 2),
        support=(-12.0 * scale, 12.0 * scale),
        name=f"gaussian({scale:g})",
    )


def from_samples(
    lam: torch.Tensor,
    values: torch.Tensor,
    *,
    name: Optional[str] = None,
) -> Symbol1D:
    """Piecewise linear symbol through tabulated samples, zero outside the table.

    Args:
        lam (torch.Tensor): Strictly increasing abscissae, shape `(N,)`.
        values (torch.Tensor): Real or complex values, shape `(N,)`.

    Keyword Args:
        name (str, optional): Identifier used in reports.

    Returns:
        Symbol1D: Interpolating symbol.
    """
    lam_np = fannypack.utils.to_numpy(torch.as_tensor(lam, dtype=torch.float64))
    values_np = fannypack.utils.to_numpy(torch.as_tensor(values).to(torch.complex128))
    if lam_np.ndim != 1 or lam_np.shape != values_np.shape or lam_np.shape[0] < 2:
        raise ValueError("Symbol tables need matching one-dimensional columns of length >= 2.")
    if np.any(np.diff(lam_np) <= 0.0):
        raise ValueError("Symbol table abscissae must be strictly increasing.")

    def fn(query: torch.Tensor) -> torch.Tensor:
        q = fannypack.utils.to_numpy(query)
        real = np.interp(q, lam_np, values_np.real, left=0.0, right=0.0)
        imag = np.interp(q, lam_np, values_np.imag, left=0.0, right=0.0)
        return torch.from_numpy(real + 1j * imag)

    return Symbol1D(
        fn=fn,
        support=(float(lam_np[0]), float(lam_np[-1])),
        name=name if name is not None else "table",
    )


def check_restriction_support(F: Symbol1D, lo: float = 0.125, hi: float = 8.0) -> None:
    """Raise `ValueError` unless the declared support of `F` lies in `[lo, hi]`."""
    if F.support[0] < lo or F.support[1] > hi:
        raise ValueError(
            f"Symbol {F.name} must be supported in [{lo:g}, {hi:g}], got {F.support}."
        )


def warn_if_aliased(F: Symbol1D, half_width: float, *, stacklevel: int = 3) -> bool:
    """Warn when the declared support of `F` is not inside `[-W/2, W/2]`."""
    aliased = F.support[0] < -0.5 * half_width or F.support[1] > 0.5 * half_width
    if aliased:
        warnings.warn(
            f"Support {F.support} of {F.name} is not well inside the symbol grid"
            f" [-{half_width:g}, {half_width:g}]; transforms may alias.",
            RuntimeWarning,
            stacklevel=stacklevel,
        )
    return aliased
