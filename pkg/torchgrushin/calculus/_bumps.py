"""Private module; avoid importing from directly.
"""

import abc
from dataclasses import dataclass
from typing import Union

import torch
from overrides import overrides


class DyadicBump(abc.ABC):
    """Even bump `chi` supported in `[-2, -1/2] u [1/2, 2]` whose dilates
    `chi_j(lambda) = chi(lambda / 2^j)` form a partition of unity on `lambda != 0`.

    Concrete bumps only provide a monotone step `s(u)` rising from 0 at `u <= -1` to 1
    at `u >= 0`. With `u = log2 |lambda|` we set `chi = s(u) - s(u - 1)`, so that partial
    sums over `j` telescope and the partition of unity holds to rounding.
    """

    @abc.abstractmethod
    def step(self, u: torch.Tensor) -> torch.Tensor:
        """Evaluate the step function.

        Args:
            u (torch.Tensor): Log-scale coordinates. May contain `-inf`.

        Returns:
            torch.Tensor: Values in `[0, 1]`, same shape as `u`.
        """

    @staticmethod
    def _log2(lam: Union[float, torch.Tensor]) -> torch.Tensor:
        return torch.log2(torch.abs(torch.as_tensor(lam, dtype=torch.float64)))

    def __call__(self, lam: Union[float, torch.Tensor]) -> torch.Tensor:
        """Evaluate `chi(lambda)`."""
        return self.piece(0, lam)

    def piece(self, j: int, lam: Union[float, torch.Tensor]) -> torch.Tensor:
        """Evaluate `chi_j(lambda) = chi(lambda / 2^j)`."""
        u = self._log2(lam) - j
        return self.step(u) - self.step(u - 1.0)

    def head(self, J: int, lam: Union[float, torch.Tensor]) -> torch.Tensor:
        """Evaluate the partial sum `sum_{j <= J} chi_j(lambda)`."""
        return 1.0 - self.tail(J, lam)

    def tail(self, J: int, lam: Union[float, torch.Tensor]) -> torch.Tensor:
        """Evaluate `sum_{j > J} chi_j(lambda)`, which vanishes for `|lambda| <= 2^J`."""
        return self.step(self._log2(lam) - J - 1.0)

    def window(self, lo: int, hi: int, lam: Union[float, torch.Tensor]) -> torch.Tensor:
        """Evaluate `sum_{lo <= j <= hi} chi_j(lambda)`."""
        assert lo <= hi
        u = self._log2(lam)
        return self.step(u - lo) - self.step(u - hi - 1.0)


@dataclass(frozen=True)
class SmoothDyadicBump(DyadicBump):
    """C-infinity bump built from `g(t) = exp(-1 / t)` for `t > 0`:
    `s(u) = g(u + 1) / (g(u + 1) + g(-u))`."""

    @staticmethod
    def _g(t: torch.Tensor) -> torch.Tensor:
        positive = t > 0.0
        safe = torch.where(positive, t, torch.ones_like(t))
        return torch.where(positive, torch.exp(-1.0 / safe), torch.zeros_like(t))

    @overrides
    def step(self, u: torch.Tensor) -> torch.Tensor:
        rise = self._g(u + 1.0)
        return rise / (rise + self._g(-u))


@dataclass(frozen=True)
class HatDyadicBump(DyadicBump):
    """Piecewise linear bump in `log2 |lambda|`, peaking at `|lambda| = 1`."""

    @overrides
    def step(self, u: torch.Tensor) -> torch.Tensor:
        return torch.clamp(u + 1.0, min=0.0, max=1.0)


def make_bump(name: str) -> DyadicBump:
    """Bump lookup by identifier (`"smooth"` or `"hat"`)."""
    if name == "smooth":
        return SmoothDyadicBump()
    elif name == "hat":
        return HatDyadicBump()
    else:
        raise ValueError(f"Unknown bump identifier: {name}")
