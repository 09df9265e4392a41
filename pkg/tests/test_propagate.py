from __future__ import annotations

import math

import numpy as np
import pytest

from jclattice.exceptions import ConfigurationError, ConvergenceError
from jclattice.model import (
    Basis,
    StateVector,
    basis_state,
    build_chain_hamiltonian,
    build_product_hamiltonian,
    chains_to_product,
    parity_permutation,
    product_basis_state,
    product_to_chains,
)
from jclattice.observables import extract_observables
from jclattice.parameters import ChainId, JCParams, TimeGrid
from jclattice.propagate import (
    RK4Propagator,
    SpectralPropagator,
    chain_spectrum,
    choose_truncation,
    default_step,
    energy_expectation,
    level_spacings,
    spectral_propagate,
    stepper_propagate,
    tail_population,
)

BETAS = [0.0, 0.5, 1.0, 2.0]
SPLITTINGS = [0.0, 0.3, 1.0]


def chain_params(beta, omega0, n_sites=64):
    return JCParams(omega=1.0, omega0=omega0, g=beta, n_sites=n_sites)


def random_product_state(n_sites, seed=7):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=2 * n_sites) + 1j * rng.normal(size=2 * n_sites)
    amps[2 * (n_sites // 2) :] = 0.0
    return StateVector(amps / np.linalg.norm(amps), Basis.PRODUCT)


def evolve_part(ham, part, grid):
    weight = part.norm
    return weight * spectral_propagate(ham, part.normalized(), grid).states


@pytest.mark.parametrize("beta", BETAS)
@pytest.mark.parametrize("omega0", SPLITTINGS)
def test_unitarity_and_energy(beta, omega0):
    params = chain_params(beta, omega0)
    ham = build_chain_hamiltonian(params, ChainId.F)
    traj = spectral_propagate(ham, basis_state(64, 0, ChainId.F), TimeGrid(0.0, 4 * math.pi, 101))
    np.testing.assert_allclose(traj.norms(), 1.0, atol=1e-10)

    series = extract_observables(traj, ChainId.F)
    np.testing.assert_allclose(series.p_g + series.p_e, 1.0, atol=1e-10)

    energies = [energy_expectation(ham, traj.state(i)) for i in range(len(traj))]
    assert energies[0] == pytest.approx(-0.5 * omega0, abs=1e-12)
    np.testing.assert_allclose(energies, energies[0], atol=1e-8)


@pytest.mark.parametrize("beta", BETAS)
@pytest.mark.parametrize("omega0", SPLITTINGS)
def test_chains_decouple(beta, omega0):
    n_sites = 32
    params = chain_params(beta, omega0, n_sites)
    grid = TimeGrid(0.0, 2 * math.pi, 41)
    product = spectral_propagate(build_product_hamiltonian(params), product_basis_state(n_sites, "g", 0), grid)
    chain = spectral_propagate(build_chain_hamiltonian(params, ChainId.F), basis_state(n_sites, 0, ChainId.F), grid)

    reordered = product.states[:, parity_permutation(n_sites)]
    np.testing.assert_allclose(reordered[:, n_sites:], chain.states, atol=1e-10)
    np.testing.assert_allclose(reordered[:, :n_sites], 0.0, atol=1e-10)

    from_product = extract_observables(product)
    from_chain = extract_observables(chain, ChainId.F)
    np.testing.assert_allclose(from_product.p_g, from_chain.p_g, atol=1e-10)
    np.testing.assert_allclose(from_product.p_rev, from_chain.p_rev, atol=1e-10)
    np.testing.assert_allclose(from_product.photon_dist, from_chain.photon_dist, atol=1e-10)


@pytest.mark.parametrize("beta", BETAS)
@pytest.mark.parametrize("omega0", SPLITTINGS)
def test_spectral_matches_stepper(beta, omega0):
    params = chain_params(beta, omega0, 24)
    ham = build_chain_hamiltonian(params, ChainId.F)
    psi0 = basis_state(24, 0, ChainId.F)
    grid = TimeGrid(0.0, 2 * math.pi, 21)
    exact = spectral_propagate(ham, psi0, grid)
    stepped = stepper_propagate(ham, psi0, grid)
    np.testing.assert_allclose(stepped.states, exact.states, atol=1e-6)
    np.testing.assert_allclose(stepped.norms(), 1.0, atol=1e-6)


@pytest.mark.parametrize("beta", BETAS)
@pytest.mark.parametrize("omega0", SPLITTINGS)
def test_truncation_doubling_is_stable(beta, omega0):
    params = chain_params(beta, omega0)
    horizon = 2 * math.pi
    n_sites = choose_truncation(params, horizon=horizon)
    grid = TimeGrid(0.0, horizon, 201)

    def observe(n):
        sized = params.with_sites(n)
        traj = spectral_propagate(build_chain_hamiltonian(sized, ChainId.F), basis_state(n, 0, ChainId.F), grid)
        return extract_observables(traj, ChainId.F)

    coarse, fine = observe(n_sites), observe(2 * n_sites)
    np.testing.assert_allclose(coarse.p_rev, fine.p_rev, atol=1e-10)
    np.testing.assert_allclose(coarse.p_g, fine.p_g, atol=1e-10)
    np.testing.assert_allclose(coarse.photon_dist, fine.photon_dist[:, :n_sites], atol=1e-10)
    assert tail_population(coarse) < 1e-10


def test_choose_truncation():
    assert choose_truncation(JCParams(g=2.0), horizon=2 * math.pi, tail_tol=1e-10) == 64
    assert choose_truncation(JCParams(g=0.0), horizon=2 * math.pi) == 16
    with pytest.raises(ConvergenceError) as excinfo:
        choose_truncation(JCParams(g=2.0), horizon=2 * math.pi, n_cap=32)
    assert excinfo.value.cap == 32
    with pytest.raises(ValueError):
        choose_truncation(JCParams(g=2.0), tail_tol=0.0)


def test_exact_revival():
    params = JCParams(omega=1.0, omega0=0.0, g=2.0, n_sites=64)
    traj = spectral_propagate(
        build_chain_hamiltonian(params, ChainId.F), basis_state(64, 0, ChainId.F), TimeGrid(0.0, 2 * math.pi, 201)
    )
    series = extract_observables(traj, ChainId.F)
    assert series.p_rev[-1] >= 1 - 1e-8
    assert series.p_rev.min() <= 1e-6
    assert series.p_rev[100] == pytest.approx(math.exp(-16.0), rel=1e-6)


def test_approximate_revival():
    params = JCParams(omega=1.0, omega0=0.3, g=2.0, n_sites=64)
    propagator = SpectralPropagator(build_chain_hamiltonian(params, ChainId.F))
    psi0 = basis_state(64, 0, ChainId.F)

    first = np.abs(propagator.evolve(psi0, np.linspace(1.8 * math.pi, 2.2 * math.pi, 2001))[:, 0]) ** 2
    second = np.abs(propagator.evolve(psi0, np.linspace(3.8 * math.pi, 4.2 * math.pi, 2001))[:, 0]) ** 2
    assert 0 < first.max() < 0.999
    assert first.max() == pytest.approx(0.98699, abs=1e-3)
    # the packet keeps bouncing, with a lower second revival
    assert 0 < second.max() < first.max()

    collapse = np.abs(propagator.evolve(psi0, np.linspace(0.8 * math.pi, 1.2 * math.pi, 201))[:, 0]) ** 2
    assert collapse.max() < 1e-2


def test_propagators_validate_input():
    params = JCParams(g=1.0, n_sites=8)
    ham = build_chain_hamiltonian(params, ChainId.F)
    grid = TimeGrid(0.0, 1.0, 5)
    with pytest.raises(ValueError, match="chain"):
        spectral_propagate(ham, basis_state(8, 0, ChainId.C), grid)
    with pytest.raises(ValueError, match="normalised"):
        spectral_propagate(ham, StateVector(2.0 * basis_state(8, 0).amps), grid)
    with pytest.raises(ValueError, match="dimension"):
        spectral_propagate(ham, basis_state(9, 0), grid)
    with pytest.raises(ValueError, match="Hermitian"):
        spectral_propagate(np.triu(np.ones((8, 8))), basis_state(8, 0), grid)


def test_trajectory_starts_at_initial_state():
    params = JCParams(g=1.0, n_sites=8)
    ham = build_chain_hamiltonian(params, ChainId.C)
    psi0 = basis_state(8, 3, ChainId.C)
    traj = spectral_propagate(ham, psi0, TimeGrid(5.0, 6.0, 3))
    np.testing.assert_allclose(traj.initial.amps, psi0.amps, atol=1e-12)
    assert traj.chain is ChainId.C
    assert len(traj) == 3


def test_rk4_steps():
    params = JCParams(g=1.0, n_sites=8)
    ham = build_chain_hamiltonian(params, ChainId.F)
    assert default_step(ham) == pytest.approx(1e-3 / ham.max_row_sum())
    assert math.isinf(default_step(np.zeros((2, 2))))

    rk4 = RK4Propagator(ham, dt_max=0.1)
    assert rk4.steps_per_interval(TimeGrid(0.0, 1.0, 11)) == 1
    assert rk4.steps_per_interval(TimeGrid(0.0, 1.0, 6)) == 2
    with pytest.raises(ConfigurationError):
        RK4Propagator(ham, dt_max=0.0)
    with pytest.raises(ConfigurationError):
        RK4Propagator(ham, dt_max=1e-9).propagate(basis_state(8, 0), TimeGrid(0.0, 1000.0, 3))


def test_wannier_stark_ladder_spacing():
    params = JCParams(omega=1.0, omega0=0.0, g=2.0, n_sites=400)
    energies = chain_spectrum(build_chain_hamiltonian(params, ChainId.F), 10)
    assert energies.size == 10
    np.testing.assert_allclose(level_spacings(energies), 1.0, atol=1e-8)


@pytest.mark.parametrize("beta", BETAS)
@pytest.mark.parametrize("omega0", SPLITTINGS)
def test_mixed_state_evolves_chain_by_chain(beta, omega0):
    n_sites = 32
    params = chain_params(beta, omega0, n_sites)
    grid = TimeGrid(0.0, 2 * math.pi, 41)
    psi0 = random_product_state(n_sites)
    product = spectral_propagate(build_product_hamiltonian(params), psi0, grid)

    part_c, part_f = product_to_chains(psi0)
    assert part_c.norm > 0.1
    assert part_f.norm > 0.1
    states_c = evolve_part(build_chain_hamiltonian(params, ChainId.C), part_c, grid)
    states_f = evolve_part(build_chain_hamiltonian(params, ChainId.F), part_f, grid)
    for i in range(len(grid.times)):
        recombined = chains_to_product(
            StateVector(states_c[i], Basis.CHAIN, ChainId.C),
            StateVector(states_f[i], Basis.CHAIN, ChainId.F),
        )
        np.testing.assert_allclose(recombined.amps, product.states[i], atol=1e-10)


@pytest.mark.parametrize("chain", [ChainId.C, ChainId.F])
@pytest.mark.parametrize("site", [0, 1, 3])
def test_exact_revival_of_any_site(chain, site):
    params = JCParams(omega=1.0, omega0=0.0, g=2.0, n_sites=64)
    traj = spectral_propagate(
        build_chain_hamiltonian(params, chain), basis_state(64, site, chain), TimeGrid(0.0, 2 * math.pi, 3)
    )
    assert extract_observables(traj, chain).p_rev[-1] >= 1 - 1e-8


def test_exact_revival_of_superposition():
    params = JCParams(omega=1.0, omega0=0.0, g=2.0, n_sites=64)
    amps = np.zeros(64, dtype=complex)
    amps[:4] = [0.5, 0.5j, -0.5, 0.5]
    psi0 = StateVector(amps, Basis.CHAIN, ChainId.F)
    traj = spectral_propagate(build_chain_hamiltonian(params, ChainId.F), psi0, TimeGrid(0.0, 2 * math.pi, 3))
    assert abs(traj.initial.overlap(traj.state(2))) ** 2 >= 1 - 1e-8


@pytest.mark.parametrize("beta", [0.5, 2.0])
@pytest.mark.parametrize("omega0", [0.0, 0.3])
def test_stepper_on_product_hamiltonian(beta, omega0):
    n_sites = 12
    params = chain_params(beta, omega0, n_sites)
    ham = build_product_hamiltonian(params)
    psi0 = random_product_state(n_sites, seed=11)
    grid = TimeGrid(0.0, math.pi, 11)
    exact = spectral_propagate(ham, psi0, grid)
    stepped = stepper_propagate(ham, psi0, grid)
    np.testing.assert_allclose(stepped.states, exact.states, atol=1e-6)


def test_rk4_norm_drift():
    params = JCParams(omega=1.0, omega0=0.3, g=2.0, n_sites=60)
    period = 2 * math.pi
    traj = stepper_propagate(
        build_chain_hamiltonian(params, ChainId.F),
        basis_state(60, 0, ChainId.F),
        TimeGrid(0.0, period, 2),
        dt_max=period / 1e5,
    )
    assert abs(traj.norms()[-1] - 1.0) < 1e-8
