"""Closed-form reference results

* Degenerate qubit (``omega0 = 0``), input ``|g>|0>``: chain F is the
  displaced oscillator ``omega a^dag a + g (a + a^dag)``, so the site-0
  excitation evolves as a coherent state of amplitude
  ``beta (exp(-i omega t) - 1)`` with ``beta = g / omega``. Its photon
  statistics is Poissonian with mean ``4 beta^2 sin^2(omega t / 2)``.
* Rotating-wave pairs: sites n (even) and n + 1 of chain C perform Rabi
  oscillations at ``Omega_n = sqrt(g^2 (n+1) + (Delta/2)^2)``.
* Wannier-Stark ladder ``E_l = l omega - g^2 / omega`` of the degenerate-qubit
  chain.

"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Tuple, Union

import numpy as np
from iminuit import Minuit
from iminuit.cost import LeastSquares
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammaln, xlogy

from .model import chain_diagonal
from .parameters import ChainId, JCParams

__all__ = [
    "FIT_MIN_SAMPLES",
    "DscClosedForm",
    "RabiFit",
    "dsc_mean_photon",
    "dsc_photon_distribution",
    "dsc_populations",
    "dsc_revival_probability",
    "fit_rabi_oscillation",
    "poisson_cutoff",
    "rabi_frequency",
    "rwa_detuning",
    "rwa_rabi",
    "slow_amplitudes",
    "wannier_stark_energies",
]

FloatOrArray = Union[float, NDArray[np.float64]]

FIT_MIN_SAMPLES = 8


def _check_beta(beta: float) -> None:
    if beta < 0:
        msg = f"g/omega must be non-negative, got {beta}"
        raise ValueError(msg)


def _as_output(value: NDArray[np.float64]) -> FloatOrArray:
    return float(value) if np.ndim(value) == 0 else value


def dsc_mean_photon(t: ArrayLike, beta: float, omega: float = 1.0) -> FloatOrArray:
    """Mean photon number ``4 beta^2 sin^2(omega t / 2)``"""
    _check_beta(beta)
    return _as_output(4.0 * beta**2 * np.sin(0.5 * omega * np.asarray(t, dtype=float)) ** 2)


def dsc_photon_distribution(n: ArrayLike, t: ArrayLike, beta: float, omega: float = 1.0) -> FloatOrArray:
    """Poisson photon statistics ``exp(-mu) mu^n / n!`` at mean ``mu(t)``

    ``n`` and ``t`` broadcast against each other.
    """
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        msg = f"Photon number must be non-negative, got {n}"
        raise ValueError(msg)
    mu = np.asarray(dsc_mean_photon(t, beta, omega))
    return _as_output(np.exp(xlogy(n_arr, mu) - mu - gammaln(n_arr + 1.0)))


def dsc_revival_probability(t: ArrayLike, beta: float, omega: float = 1.0) -> FloatOrArray:
    """``exp(-4 beta^2 sin^2(omega t / 2))``"""
    return _as_output(np.exp(-np.asarray(dsc_mean_photon(t, beta, omega))))


def dsc_populations(t: ArrayLike, beta: float, omega: float = 1.0) -> Tuple[FloatOrArray, FloatOrArray]:
    """``(P_g, P_e)`` with ``P_g = (1 + exp(-2 mu)) / 2``"""
    mu = np.asarray(dsc_mean_photon(t, beta, omega))
    p_g = 0.5 * (1.0 + np.exp(-2.0 * mu))
    return _as_output(p_g), _as_output(1.0 - p_g)


def poisson_cutoff(mu: float) -> int:
    """Photon number beyond which the Poisson tail is far below 1e-12"""
    return math.ceil(mu + 20.0 * math.sqrt(mu) + 40.0)


@dataclass(frozen=True)
class DscClosedForm:
    """
    Exact dynamics of the degenerate-qubit chain for the input ``|g>|0>``.

    Attributes:
        g_over_omega (float): Coupling ratio ``beta``.
        omega (float): Oscillator frequency, sets the time scale.

    """

    g_over_omega: float
    omega: float = 1.0

    def __post_init__(self) -> None:
        _check_beta(self.g_over_omega)
        if not self.omega > 0:
            msg = f"omega must be positive, got {self.omega}"
            raise ValueError(msg)

    @classmethod
    def from_params(cls, params: JCParams) -> DscClosedForm:
        if params.omega0 != 0:
            msg = (
                f"The closed form holds only for omega0 = 0 (got omega0 = {params.omega0}); "
                "revivals are approximate otherwise"
            )
            raise ValueError(msg)
        return cls(g_over_omega=params.g_over_omega, omega=params.omega)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def mean_photon(self, t: ArrayLike) -> FloatOrArray:
        return dsc_mean_photon(t, self.g_over_omega, self.omega)

    def photon_distribution(self, n: ArrayLike, t: ArrayLike) -> FloatOrArray:
        return dsc_photon_distribution(n, t, self.g_over_omega, self.omega)

    def revival_probability(self, t: ArrayLike) -> FloatOrArray:
        return dsc_revival_probability(t, self.g_over_omega, self.omega)

    def populations(self, t: ArrayLike) -> Tuple[FloatOrArray, FloatOrArray]:
        return dsc_populations(t, self.g_over_omega, self.omega)

    def photon_matrix(self, times: ArrayLike, n_sites: int) -> NDArray[np.float64]:
        """``P(n, t)`` for ``n < n_sites``, shape ``(len(times), n_sites)``"""
        times = np.asarray(times, dtype=float)
        return np.asarray(
            self.photon_distribution(np.arange(n_sites)[None, :], times[:, None]), dtype=float
        )


def rabi_frequency(n: int, delta: float, g: float) -> float:
    """``Omega_n = sqrt(g^2 (n + 1) + (Delta / 2)^2)``"""
    if n < 0:
        msg = f"Site index must be non-negative, got {n}"
        raise ValueError(msg)
    return math.sqrt(g**2 * (n + 1) + (0.5 * delta) ** 2)


def rwa_detuning(params: JCParams, chain: Union[ChainId, str] = ChainId.C) -> float:
    """Pair detuning: ``omega - omega0`` on chain C, ``omega + omega0`` on chain F"""
    chain = ChainId.parse(chain)
    return params.omega - chain.sign * params.omega0


def rwa_rabi(n: int, delta: float, g: float, t: ArrayLike) -> Tuple[FloatOrArray, FloatOrArray]:
    """Rotating-wave populations of the pair (n, n + 1), n even, from ``theta_n(0) = 1``

    Returns:
        ``(|theta_n|^2, |theta_{n+1}|^2)`` with
        ``|theta_{n+1}|^2 = (kappa_n / Omega_n)^2 sin^2(Omega_n t)``
    """
    if n < 0 or n % 2:
        msg = f"The rotating-wave pair starts on an even site, got n = {n}"
        raise ValueError(msg)
    t_arr = np.asarray(t, dtype=float)
    omega_n = rabi_frequency(n, delta, g)
    if omega_n == 0:
        upper = np.zeros_like(t_arr)
    else:
        kappa_sq = g**2 * (n + 1)
        upper = kappa_sq / omega_n**2 * np.sin(omega_n * t_arr) ** 2
    return _as_output(1.0 - upper), _as_output(upper)


def slow_amplitudes(
    states: NDArray[np.complex128], times: ArrayLike, params: JCParams, chain: Union[ChainId, str] = ChainId.C
) -> NDArray[np.complex128]:
    """Remove the on-site phases: ``theta_n = c_n exp(i (±(-1)^n omega0/2 + n omega) t)``

    Args:
        states: Chain amplitudes, shape ``(n_samples, N)``
        times: Sample times
        params: Model parameters
        chain: Chain of the amplitudes

    Returns:
        Slowly varying amplitudes, same shape as ``states``
    """
    n_sites = states.shape[1]
    energies = chain_diagonal(n_sites, params.omega, params.omega0, ChainId.parse(chain))
    phase = np.exp(1j * np.outer(np.asarray(times, dtype=float), energies))
    return states * phase  # type: ignore[no-any-return]


def wannier_stark_energies(n_levels: int, g: float, omega: float = 1.0) -> NDArray[np.float64]:
    """Equally spaced ladder ``E_l = l omega - g^2 / omega``, l = 0..L-1"""
    if n_levels < 1:
        msg = f"Number of levels must be >= 1, got {n_levels}"
        raise ValueError(msg)
    return np.arange(n_levels) * omega - g**2 / omega  # type: ignore[no-any-return]


@dataclass(frozen=True)
class RabiFit:
    """
    Result of a ``A sin^2(Omega t)`` fit.

    Attributes:
        frequency (float): Rabi frequency ``Omega``.
        amplitude (float): Transfer peak ``A``.
        frequency_error (float): Parabolic error on ``Omega``.
        amplitude_error (float): Parabolic error on ``A``.
        valid (bool): Whether the minimisation converged.

    """

    frequency: float
    amplitude: float
    frequency_error: float
    amplitude_error: float
    valid: bool


def _rabi_model(t: NDArray[np.float64], amplitude: float, frequency: float) -> NDArray[np.float64]:
    return amplitude * np.sin(frequency * t) ** 2  # type: ignore[no-any-return]


def _frequency_seed(times: NDArray[np.float64], population: NDArray[np.float64]) -> float:
    # sin^2(Omega t) oscillates at Omega / pi cycles per unit time
    signal = population - population.mean()
    n_fft = 8 * signal.size
    spectrum = np.abs(np.fft.rfft(signal, n=n_fft))
    freqs = np.fft.rfftfreq(n_fft, d=times[1] - times[0])
    peak = int(np.argmax(spectrum[1:])) + 1
    return float(math.pi * freqs[peak])


def fit_rabi_oscillation(times: ArrayLike, population: ArrayLike, **kwds: Any) -> RabiFit:
    """Least-squares fit of ``A sin^2(Omega t)`` to a population starting at zero

    The frequency is seeded from the zero-padded FFT peak; keyword arguments
    are forwarded to ``Minuit.migrad``.
    """
    times = np.asarray(times, dtype=float)
    population = np.asarray(population, dtype=float)
    if times.shape != population.shape or times.size < FIT_MIN_SAMPLES:
        msg = f"Need matching time and population arrays with at least {FIT_MIN_SAMPLES} samples"
        raise ValueError(msg)

    seed = _frequency_seed(times, population)
    cost = LeastSquares(times, population, np.full(times.shape, 1e-3), _rabi_model)
    m = Minuit(cost, amplitude=float(population.max()), frequency=seed)
    m.limits["amplitude"] = (0.0, 1.5)
    m.limits["frequency"] = (0.5 * seed, 1.5 * seed)
    m.migrad(**kwds)
    m.hesse()
    return RabiFit(
        frequency=float(m.values["frequency"]),
        amplitude=float(m.values["amplitude"]),
        frequency_error=float(m.errors["frequency"]),
        amplitude_error=float(m.errors["amplitude"]),
        valid=bool(m.valid),
    )
