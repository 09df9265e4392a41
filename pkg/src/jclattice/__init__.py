"""
Copyright (c) 2024 Simon. All rights reserved.

jclattice: Jaynes-Cummings dynamics in Fock space as light transport in
engineered waveguide superlattices.
"""

from __future__ import annotations

from .config import ScenarioConfig, load_config
from .design import FabricationConstants, WaveguideGeometry, design_array, index_gradient
from .exceptions import (
    ConfigurationError,
    ConvergenceError,
    EigensolverError,
    InfeasibleDesignError,
    JCLatticeError,
    UnitError,
)
from .model import (
    Basis,
    ChainHamiltonian,
    StateVector,
    basis_state,
    build_chain_hamiltonian,
    build_product_hamiltonian,
    chains_to_product,
    product_basis_state,
    product_to_chains,
)
from .observables import ObservableSeries, extract_observables
from .oracles import DscClosedForm, fit_rabi_oscillation, rwa_rabi, wannier_stark_energies
from .parameters import ChainId, JCParams, TimeGrid, create_params
from .propagate import (
    RK4Propagator,
    SpectralPropagator,
    Trajectory,
    choose_truncation,
    spectral_propagate,
    stepper_propagate,
)
from .runner import oracle_report, run_scenario
from .version import version as __version__

__all__ = [
    "Basis",
    "ChainHamiltonian",
    "ChainId",
    "ConfigurationError",
    "ConvergenceError",
    "DscClosedForm",
    "EigensolverError",
    "FabricationConstants",
    "InfeasibleDesignError",
    "JCLatticeError",
    "JCParams",
    "ObservableSeries",
    "RK4Propagator",
    "ScenarioConfig",
    "SpectralPropagator",
    "StateVector",
    "TimeGrid",
    "Trajectory",
    "UnitError",
    "WaveguideGeometry",
    "__version__",
    "basis_state",
    "build_chain_hamiltonian",
    "build_product_hamiltonian",
    "chains_to_product",
    "choose_truncation",
    "create_params",
    "design_array",
    "extract_observables",
    "fit_rabi_oscillation",
    "index_gradient",
    "load_config",
    "oracle_report",
    "product_basis_state",
    "product_to_chains",
    "run_scenario",
    "rwa_rabi",
    "spectral_propagate",
    "stepper_propagate",
    "wannier_stark_energies",
]
