"""
Observables

Qubit populations, revival probability and photon statistics read off a
trajectory. On chain F even sites are ``|g>`` components and odd sites
``|e>`` components, so for the input ``|g>|0>``

    P_g = sum_n |f_2n|^2,  P_e = sum_n |f_2n+1|^2,  P(n, t) = |f_n|^2,
    P_rev = |f_0|^2.

On chain C the parity assignment is reversed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from .model import Basis
from .parameters import ChainId

if TYPE_CHECKING:
    from .propagate import Trajectory

__all__ = ["ObservableSeries", "extract_observables", "revival_peak"]


@dataclass(frozen=True, eq=False)
class ObservableSeries:
    """
    Time-sampled observables.

    Attributes:
        times (NDArray): Sample times.
        p_g (NDArray): Ground-state population.
        p_e (NDArray): Excited-state population.
        p_rev (NDArray): Return probability ``|<psi(0)|psi(t)>|^2``.
        photon_dist (NDArray): ``P(n, t)``, shape ``(n_samples, N)``.

    """

    times: NDArray[np.float64]
    p_g: NDArray[np.float64]
    p_e: NDArray[np.float64]
    p_rev: NDArray[np.float64]
    photon_dist: NDArray[np.float64]

    @property
    def mean_photon(self) -> NDArray[np.float64]:
        """``<n>(t) = sum_n n P(n, t)``"""
        return self.photon_dist @ np.arange(self.photon_dist.shape[1])  # type: ignore[no-any-return]

    @property
    def n_sites(self) -> int:
        return int(self.photon_dist.shape[1])

    def __len__(self) -> int:
        return int(self.times.size)


def extract_observables(
    traj: Trajectory, chain: Optional[Union[ChainId, str]] = None
) -> ObservableSeries:
    """Observables of a chain-basis or product-basis trajectory

    Args:
        traj: Trajectory to analyse
        chain: Expected chain of a chain-basis trajectory; must be None for
            product-basis trajectories

    Returns:
        ObservableSeries
    """
    probs = np.abs(traj.states) ** 2
    overlap = traj.states @ traj.states[0].conj()
    p_rev = np.abs(overlap) ** 2

    if traj.basis is Basis.PRODUCT:
        if chain is not None:
            msg = "A product-basis trajectory has no chain; pass chain=None"
            raise ValueError(msg)
        p_e_sites = probs[:, 0::2]
        p_g_sites = probs[:, 1::2]
        return ObservableSeries(
            times=traj.times,
            p_g=p_g_sites.sum(axis=1),
            p_e=p_e_sites.sum(axis=1),
            p_rev=p_rev,
            photon_dist=p_e_sites + p_g_sites,
        )

    assert traj.chain is not None
    if chain is not None and ChainId.parse(chain) is not traj.chain:
        msg = f"Trajectory lives on chain {traj.chain.value}, not on chain {ChainId.parse(chain).value}"
        raise ValueError(msg)
    even = probs[:, 0::2].sum(axis=1)
    odd = probs[:, 1::2].sum(axis=1)
    p_g, p_e = (even, odd) if traj.chain is ChainId.F else (odd, even)
    return ObservableSeries(
        times=traj.times,
        p_g=p_g,
        p_e=p_e,
        p_rev=p_rev,
        photon_dist=probs,
    )


def revival_peak(
    series: ObservableSeries, omega: float = 1.0, window: Tuple[float, float] = (0.9, 1.1)
) -> Optional[float]:
    """Largest ``P_rev`` with ``omega t / 2 pi`` inside ``window``

    Returns None if no sample falls in the window.
    """
    cycles = omega * series.times / (2.0 * math.pi)
    inside = (cycles >= window[0]) & (cycles <= window[1])
    if not inside.any():
        return None
    return float(series.p_rev[inside].max())
