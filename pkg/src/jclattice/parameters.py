"""
Model parameters

Dimensionless parameters of the Jaynes-Cummings Hamiltonian, the parity-chain
selector and the uniform time grid used by the propagators.

All three frequencies share one unit; time is measured in the inverse of that
unit, so with the default ``omega = 1`` the time axis is the normalised time
``omega * t``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Any, Optional, Sequence, Union

import numpy as np
from numpy.typing import NDArray

__all__ = ["ChainId", "JCParams", "TimeGrid", "create_params", "revival_period"]


class ChainId(str, enum.Enum):
    """Parity chain selector

    Chain ``C`` holds the amplitudes ``c_n`` (``|e>|n>`` for even n,
    ``|g>|n>`` for odd n), chain ``F`` the amplitudes ``f_n`` (``|g>|n>`` for
    even n, ``|e>|n>`` for odd n). The chains differ only by the sign of the
    qubit term on the diagonal: ``+(-1)^n omega0/2`` on C and
    ``-(-1)^n omega0/2`` on F.
    """

    C = "C"
    F = "F"

    @property
    def sign(self) -> int:
        return 1 if self is ChainId.C else -1

    @property
    def other(self) -> ChainId:
        return ChainId.F if self is ChainId.C else ChainId.C

    @classmethod
    def parse(cls, value: Union[str, ChainId]) -> ChainId:
        if isinstance(value, ChainId):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            msg = f"Unknown chain {value!r}, expected 'C' or 'F'"
            raise ValueError(msg) from None


@dataclass(frozen=True)
class JCParams:
    """
    Dimensionless Jaynes-Cummings parameters plus the Fock-space truncation.

    Attributes:
        omega (float): Oscillator frequency (index gradient of the lattice).
        omega0 (float): Qubit transition frequency (propagation-constant mismatch).
        g (float): Coupling strength.
        n_sites (int): Number of Fock levels 0..N-1 kept per chain.

    """

    omega: float = 1.0
    omega0: float = 0.0
    g: float = 0.0
    n_sites: int = 64

    def __post_init__(self) -> None:
        if not self.omega > 0:
            msg = f"omega must be positive, got {self.omega}"
            raise ValueError(msg)
        if not self.omega0 >= 0:
            msg = f"omega0 must be non-negative, got {self.omega0}"
            raise ValueError(msg)
        if not self.g >= 0:
            msg = f"g must be non-negative, got {self.g}"
            raise ValueError(msg)
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            msg = f"n_sites must be an integer >= 2, got {self.n_sites}"
            raise ValueError(msg)

    @property
    def g_over_omega(self) -> float:
        return self.g / self.omega

    @property
    def omega0_over_omega(self) -> float:
        return self.omega0 / self.omega

    @property
    def period(self) -> float:
        """Revival period ``2 pi / omega`` of the degenerate-qubit lattice"""
        return revival_period(self.omega)

    def with_sites(self, n_sites: int) -> JCParams:
        return replace(self, n_sites=n_sites)


def revival_period(omega: float) -> float:
    return 2.0 * math.pi / omega


def create_params(
    var: Optional[Union[Sequence[Any], JCParams]] = None,
    g_over_omega: Optional[float] = None,
    omega0_over_omega: Optional[float] = None,
    omega: float = 1.0,
    n_sites: int = 64,
) -> JCParams:
    """Create a JCParams object

    Args:
        var (list or tuple): ``(g/omega, omega0/omega)`` or
            ``(g/omega, omega0/omega, n_sites)``; ignored if the ratios are given
        g_over_omega (float): Coupling ratio
        omega0_over_omega (float): Qubit splitting ratio
        omega (float): Frequency unit
        n_sites (int): Truncation size

    Returns:
        JCParams object

    """
    if isinstance(var, JCParams):
        return var
    if var is not None:
        var = list(var)
        assert len(var) in (2, 3), "Please use a format like (g/omega, omega0/omega[, n_sites])"
        if g_over_omega is None:
            g_over_omega = float(var[0])
        if omega0_over_omega is None:
            omega0_over_omega = float(var[1])
        if len(var) == 3:
            n_sites = int(var[2])
    g_over_omega = g_over_omega or 0.0
    omega0_over_omega = omega0_over_omega or 0.0
    return JCParams(
        omega=omega,
        omega0=omega0_over_omega * omega,
        g=g_over_omega * omega,
        n_sites=n_sites,
    )


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling of ``[t_start, t_end]`` including both endpoints"""

    t_start: float
    t_end: float
    n_samples: int

    def __post_init__(self) -> None:
        if not self.t_end > self.t_start:
            msg = f"t_end ({self.t_end}) must exceed t_start ({self.t_start})"
            raise ValueError(msg)
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            msg = f"n_samples must be an integer >= 2, got {self.n_samples}"
            raise ValueError(msg)

    @property
    def times(self) -> NDArray[np.float64]:
        return np.linspace(self.t_start, self.t_end, int(self.n_samples))

    @property
    def spacing(self) -> float:
        return (self.t_end - self.t_start) / (self.n_samples - 1)

    @classmethod
    def periods(cls, omega: float, n_periods: float, n_samples: int) -> TimeGrid:
        """Grid over ``n_periods`` revival periods starting at t = 0"""
        return cls(0.0, n_periods * revival_period(omega), n_samples)
