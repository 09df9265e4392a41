"""Time evolution

Two independent propagators for ``i d(psi)/dt = H psi``:

* :class:`SpectralPropagator` diagonalises the Hamiltonian once (the real
  symmetric tridiagonal solver for chains, the dense Hermitian solver for the
  product basis) and evolves any number of initial states exactly.
* :class:`RK4Propagator` is a classical fourth-order Runge-Kutta integrator
  with a fixed step, used as a cross-check on the eigensolver.

:func:`choose_truncation` picks a chain length by successive doubling.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .exceptions import ConfigurationError, ConvergenceError, EigensolverError
from .model import Basis, ChainHamiltonian, StateVector, basis_state, build_chain_hamiltonian
from .observables import ObservableSeries, extract_observables
from .parameters import ChainId, JCParams, TimeGrid
from .utils import ClassLoggingMixin

__all__ = [
    "Eigendecomposition",
    "RK4Propagator",
    "SpectralPropagator",
    "Trajectory",
    "chain_spectrum",
    "choose_truncation",
    "diagonalize",
    "energy_expectation",
    "level_spacings",
    "spectral_propagate",
    "stepper_propagate",
]

logger = logging.getLogger(__name__)

Operator = Union[ChainHamiltonian, NDArray[np.float64], NDArray[np.complex128]]

NORM_TOL = 1e-10
MAX_STEPS = 10**8


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Sampled time evolution of one initial state.

    Attributes:
        grid (TimeGrid): Sampling times.
        states (NDArray): Amplitudes, shape ``(n_samples, dim)``.
        basis (Basis): Basis of the initial state.
        chain (Optional[ChainId]): Chain of the initial state, if chain basis.

    """

    grid: TimeGrid
    states: NDArray[np.complex128]
    basis: Basis
    chain: Optional[ChainId]

    @property
    def times(self) -> NDArray[np.float64]:
        return self.grid.times

    @property
    def initial(self) -> StateVector:
        return self.state(0)

    def state(self, index: int) -> StateVector:
        return StateVector(self.states[index], self.basis, self.chain)

    def norms(self) -> NDArray[np.float64]:
        return np.linalg.norm(self.states, axis=1)  # type: ignore[no-any-return]

    def __len__(self) -> int:
        return int(self.states.shape[0])


def _dense(hamiltonian: Operator) -> NDArray[np.complex128]:
    if isinstance(hamiltonian, ChainHamiltonian):
        return hamiltonian.to_dense().astype(complex)
    return np.asarray(hamiltonian, dtype=complex)


def _check_operator(hamiltonian: Operator, psi0: StateVector) -> None:
    if isinstance(hamiltonian, ChainHamiltonian):
        if psi0.basis is not Basis.CHAIN:
            msg = "A chain Hamiltonian needs a chain-basis initial state"
            raise ValueError(msg)
        if psi0.chain is not hamiltonian.chain:
            msg = f"Initial state lives on chain {psi0.chain}, Hamiltonian on chain {hamiltonian.chain}"
            raise ValueError(msg)
        dim = hamiltonian.size
    else:
        mat = np.asarray(hamiltonian)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            msg = f"Hamiltonian must be a square matrix, got shape {mat.shape}"
            raise ValueError(msg)
        if not np.allclose(mat, mat.conj().T, rtol=0, atol=1e-12):
            msg = "Hamiltonian is not Hermitian"
            raise ValueError(msg)
        dim = mat.shape[0]
    if psi0.amps.size != dim:
        msg = f"Initial state has dimension {psi0.amps.size}, Hamiltonian {dim}"
        raise ValueError(msg)
    if not psi0.is_normalized(NORM_TOL):
        msg = f"Initial state must be normalised, got norm {psi0.norm!r}"
        raise ValueError(msg)


@dataclass(frozen=True, eq=False)
class Eigendecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns)"""

    energies: NDArray[np.float64]
    vectors: NDArray[np.float64]


def diagonalize(hamiltonian: Operator) -> Eigendecomposition:
    """Full eigendecomposition of a chain or product Hamiltonian"""
    try:
        if isinstance(hamiltonian, ChainHamiltonian):
            energies, vectors = scipy.linalg.eigh_tridiagonal(hamiltonian.diag, hamiltonian.offdiag)
        else:
            energies, vectors = scipy.linalg.eigh(np.asarray(hamiltonian))
    except (np.linalg.LinAlgError, ValueError) as exc:
        msg = f"Eigendecomposition failed: {exc}"
        raise EigensolverError(msg) from exc
    if not (np.all(np.isfinite(energies)) and np.all(np.isfinite(vectors))):
        msg = "Eigendecomposition returned non-finite values"
        raise EigensolverError(msg)
    return Eigendecomposition(energies=energies, vectors=vectors)


def chain_spectrum(hamiltonian: Operator, n_levels: Optional[int] = None) -> NDArray[np.float64]:
    """Lowest ``n_levels`` eigenvalues (all if None)"""
    if isinstance(hamiltonian, ChainHamiltonian):
        try:
            if n_levels is None:
                energies = scipy.linalg.eigh_tridiagonal(
                    hamiltonian.diag, hamiltonian.offdiag, eigvals_only=True
                )
            else:
                energies = scipy.linalg.eigh_tridiagonal(
                    hamiltonian.diag,
                    hamiltonian.offdiag,
                    eigvals_only=True,
                    select="i",
                    select_range=(0, n_levels - 1),
                )
        except (np.linalg.LinAlgError, ValueError) as exc:
            msg = f"Eigenvalue computation failed: {exc}"
            raise EigensolverError(msg) from exc
    else:
        energies = diagonalize(hamiltonian).energies
        if n_levels is not None:
            energies = energies[:n_levels]
    return np.asarray(energies, dtype=float)


def level_spacings(energies: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.diff(np.sort(energies))


def energy_expectation(hamiltonian: Operator, state: Union[StateVector, NDArray[np.complex128]]) -> float:
    """``<psi|H|psi>``"""
    amps = state.amps if isinstance(state, StateVector) else np.asarray(state, dtype=complex)
    if isinstance(hamiltonian, ChainHamiltonian):
        h_psi = hamiltonian.matvec(amps)
    else:
        h_psi = np.asarray(hamiltonian) @ amps
    return float(np.vdot(amps, h_psi).real)


class SpectralPropagator(ClassLoggingMixin):
    """Exact propagation through the eigenbasis of a Hamiltonian

    The eigendecomposition is computed once and reused for every initial
    state; it is never mutated afterwards, so one propagator may serve
    concurrent callers.
    """

    def __init__(self, hamiltonian: Operator) -> None:
        super().__init__()
        self.hamiltonian = hamiltonian
        self.decomposition = diagonalize(hamiltonian)
        self.debug(f"Diagonalised operator of dimension {self.decomposition.energies.size}")

    def evolve(self, psi0: StateVector, times: NDArray[np.float64]) -> NDArray[np.complex128]:
        """Amplitudes at ``times`` measured from the moment ``psi0`` is given"""
        vectors = self.decomposition.vectors
        coeffs = vectors.conj().T @ psi0.amps
        phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), self.decomposition.energies))
        return (phases * coeffs) @ vectors.T  # type: ignore[no-any-return]

    def propagate(self, psi0: StateVector, grid: TimeGrid) -> Trajectory:
        """Propagate ``psi0``, the state at ``grid.t_start``, over the grid"""
        _check_operator(self.hamiltonian, psi0)
        states = self.evolve(psi0, grid.times - grid.t_start)
        return Trajectory(grid=grid, states=states, basis=psi0.basis, chain=psi0.chain)


def spectral_propagate(hamiltonian: Operator, psi0: StateVector, grid: TimeGrid) -> Trajectory:
    """Exact evolution by full eigendecomposition"""
    return SpectralPropagator(hamiltonian).propagate(psi0, grid)


def default_step(hamiltonian: Operator) -> float:
    """Step bound ``0.001 / ||H||`` (max row sum) under which RK4 matches the spectral result to 1e-6"""
    if isinstance(hamiltonian, ChainHamiltonian):
        norm = hamiltonian.max_row_sum()
    else:
        norm = float(np.abs(np.asarray(hamiltonian)).sum(axis=1).max())
    return math.inf if norm == 0 else 1e-3 / norm


class RK4Propagator(ClassLoggingMixin):
    """Classical fourth-order Runge-Kutta integration of ``d(psi)/dt = -i H psi``

    Each sampling interval is split into the smallest number of equal steps
    not exceeding ``dt_max``. The equation is linear and autonomous, so the
    four stages are applied once to the identity to obtain the one-step map,
    which is then raised to the number of steps per interval.
    """

    def __init__(self, hamiltonian: Operator, dt_max: Optional[float] = None) -> None:
        super().__init__()
        if dt_max is None:
            dt_max = default_step(hamiltonian)
        if not dt_max > 0:
            msg = f"dt_max must be positive, got {dt_max}"
            raise ConfigurationError(msg, field="dt_max")
        self.hamiltonian = hamiltonian
        self.dt_max = dt_max
        self._generator = -1j * _dense(hamiltonian)

    def step_matrix(self, dt: float) -> NDArray[np.complex128]:
        gen = self._generator
        y = np.eye(gen.shape[0], dtype=complex)
        k1 = gen @ y
        k2 = gen @ (y + 0.5 * dt * k1)
        k3 = gen @ (y + 0.5 * dt * k2)
        k4 = gen @ (y + dt * k3)
        return y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)  # type: ignore[no-any-return]

    def steps_per_interval(self, grid: TimeGrid) -> int:
        if math.isinf(self.dt_max):
            return 1
        return max(1, math.ceil(grid.spacing / self.dt_max * (1 - 1e-12)))

    def propagate(self, psi0: StateVector, grid: TimeGrid) -> Trajectory:
        _check_operator(self.hamiltonian, psi0)
        n_steps = self.steps_per_interval(grid)
        total = n_steps * (grid.n_samples - 1)
        if total > MAX_STEPS:
            msg = (
                f"RK4 would need {total} steps (> {MAX_STEPS}); "
                f"increase dt_max or shorten the time grid"
            )
            raise ConfigurationError(msg, field="dt_max")
        dt = grid.spacing / n_steps
        self.debug(f"RK4 with {n_steps} steps of {dt:.3e} per sample, {total} in total")

        interval_map = np.linalg.matrix_power(self.step_matrix(dt), n_steps)
        states = np.empty((grid.n_samples, psi0.amps.size), dtype=complex)
        states[0] = psi0.amps
        for i in range(1, grid.n_samples):
            states[i] = interval_map @ states[i - 1]
        return Trajectory(grid=grid, states=states, basis=psi0.basis, chain=psi0.chain)


def stepper_propagate(
    hamiltonian: Operator, psi0: StateVector, grid: TimeGrid, dt_max: Optional[float] = None
) -> Trajectory:
    """Fixed-step RK4 evolution with step ``<= dt_max``"""
    return RK4Propagator(hamiltonian, dt_max).propagate(psi0, grid)


def _max_difference(coarse: ObservableSeries, fine: ObservableSeries) -> float:
    n_coarse = coarse.photon_dist.shape[1]
    diffs = [
        np.abs(coarse.p_g - fine.p_g).max(),
        np.abs(coarse.p_e - fine.p_e).max(),
        np.abs(coarse.p_rev - fine.p_rev).max(),
        np.abs(coarse.photon_dist - fine.photon_dist[:, :n_coarse]).max(),
        np.abs(fine.photon_dist[:, n_coarse:]).max(),
    ]
    return float(max(diffs))


def tail_population(series: ObservableSeries, fraction: float = 0.1) -> float:
    """Largest population found in the top ``fraction`` of sites at any sample"""
    n_sites = series.photon_dist.shape[1]
    n_top = max(1, math.ceil(fraction * n_sites))
    return float(series.photon_dist[:, n_sites - n_top :].sum(axis=1).max())


def choose_truncation(
    params: JCParams,
    horizon: Optional[float] = None,
    tail_tol: float = 1e-10,
    chain: Union[ChainId, str] = ChainId.F,
    initial_site: int = 0,
    n_samples: int = 201,
    n_start: int = 16,
    n_cap: int = 2**14,
) -> int:
    """Smallest chain length giving converged observables up to ``horizon``

    Starting from ``n_start`` the length is doubled until the observables of
    N and 2N agree to ``tail_tol`` at every sample and the population of the
    top 10% of the N sites never reaches ``tail_tol``.

    Args:
        params: Model parameters; ``params.n_sites`` is ignored
        horizon: Propagation time, two revival periods by default
        tail_tol: Convergence tolerance on probabilities, in (0, 1)
        chain: Chain carrying the excitation
        initial_site: Initially excited site
        n_samples: Samples of the comparison grid
        n_start: First tested length
        n_cap: Largest length that may be tested

    Returns:
        The chosen number of sites

    Raises:
        ConvergenceError: if no length up to ``n_cap`` converges
    """
    if not 0 < tail_tol < 1:
        msg = f"tail_tol must lie in (0, 1), got {tail_tol}"
        raise ValueError(msg)
    chain = ChainId.parse(chain)
    if horizon is None:
        horizon = 2.0 * params.period
    grid = TimeGrid(0.0, horizon, n_samples)
    n_start = max(n_start, initial_site + 1)

    def observe(n_sites: int) -> ObservableSeries:
        sized = params.with_sites(n_sites)
        traj = spectral_propagate(
            build_chain_hamiltonian(sized, chain), basis_state(n_sites, initial_site, chain), grid
        )
        return extract_observables(traj, chain)

    n_sites = n_start
    current = observe(n_sites)
    while 2 * n_sites <= n_cap:
        refined = observe(2 * n_sites)
        difference = _max_difference(current, refined)
        tail = tail_population(current)
        logger.debug(
            "N=%d: max change on doubling %.3e, tail population %.3e", n_sites, difference, tail
        )
        if difference < tail_tol and tail < tail_tol:
            logger.info("Truncation converged at N=%d (tol %.1e)", n_sites, tail_tol)
            return n_sites
        n_sites *= 2
        current = refined
    msg = f"Truncation did not converge to {tail_tol:.1e} below the cap N={n_cap}"
    raise ConvergenceError(msg, cap=n_cap)
