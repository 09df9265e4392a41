"""Hamiltonians and state representations

The Jaynes-Cummings Hamiltonian

    H = omega0/2 sigma_z + omega a^dag a + g (sigma_+ + sigma_-)(a + a^dag)

is built in the product basis ``|e>|n>, |g>|n>`` truncated to photon numbers
``0..N-1``, and in its two decoupled parity chains. Product-basis vectors are
stored interleaved, ``[a_0, b_0, a_1, b_1, ...]`` with ``a_n`` the ``|e>|n>``
amplitude and ``b_n`` the ``|g>|n>`` amplitude, so the parity reshuffling

    c_n = a_n, f_n = b_n   (n even)
    c_n = b_n, f_n = a_n   (n odd)

is a pure reindexing.

"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import block_diag

from .parameters import ChainId, JCParams

__all__ = [
    "Basis",
    "ChainHamiltonian",
    "StateVector",
    "basis_state",
    "build_chain_hamiltonian",
    "build_product_hamiltonian",
    "chain_block_diagonal",
    "chain_diagonal",
    "chains_to_product",
    "coupling",
    "parity_permutation",
    "product_basis_state",
    "product_to_chains",
]


def coupling(n: ArrayLike, g: float) -> Union[float, NDArray[np.float64]]:
    """Hopping rate ``kappa_n = g sqrt(n + 1)`` between sites n and n + 1

    Args:
        n: Site index or array of indices, non-negative
        g: Coupling strength, non-negative

    Returns:
        float for a scalar index, array otherwise
    """
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        msg = f"Site index must be non-negative, got {n}"
        raise ValueError(msg)
    if g < 0:
        msg = f"Coupling g must be non-negative, got {g}"
        raise ValueError(msg)
    rate = g * np.sqrt(n_arr + 1.0)
    if rate.ndim == 0:
        return float(rate)
    return rate  # type: ignore[no-any-return]


def _site_energy(
    qubit_sign: ArrayLike, n: ArrayLike, omega: float, omega0: float
) -> NDArray[np.float64]:
    # +1 for |e>, -1 for |g>; shared by the chain and product builders so
    # both produce bit-identical diagonals
    return np.asarray(qubit_sign, dtype=float) * (0.5 * omega0) + np.asarray(n) * omega  # type: ignore[no-any-return]


def _parity(n_sites: int) -> NDArray[np.float64]:
    return np.where(np.arange(n_sites) % 2 == 0, 1.0, -1.0)


def chain_diagonal(
    n_sites: int, omega: float, omega0: float, chain: ChainId
) -> NDArray[np.float64]:
    """Diagonal ``±(-1)^n omega0/2 + n omega`` of a parity chain

    ``omega0`` is not sign-restricted here: chain C at ``omega0`` equals chain
    F at ``-omega0``.
    """
    chain = ChainId.parse(chain)
    return _site_energy(chain.sign * _parity(n_sites), np.arange(n_sites), omega, omega0)


@dataclass(frozen=True, eq=False)
class ChainHamiltonian:
    """
    Real symmetric tridiagonal Hamiltonian of one parity chain.

    Attributes:
        diag (NDArray): On-site energies, length N.
        offdiag (NDArray): Bond couplings ``kappa_n``, length N - 1.
        chain (ChainId): Which chain the operator describes.

    """

    diag: NDArray[np.float64]
    offdiag: NDArray[np.float64]
    chain: ChainId = ChainId.F

    def __post_init__(self) -> None:
        if self.diag.ndim != 1 or self.offdiag.shape != (self.diag.size - 1,):
            msg = (
                f"Inconsistent tridiagonal shapes: diag {self.diag.shape}, "
                f"offdiag {self.offdiag.shape}"
            )
            raise ValueError(msg)

    @property
    def size(self) -> int:
        return int(self.diag.size)

    def to_dense(self) -> NDArray[np.float64]:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)  # type: ignore[no-any-return]

    def matvec(self, psi: NDArray[np.complex128]) -> NDArray[np.complex128]:
        out = self.diag * psi
        out[:-1] += self.offdiag * psi[1:]
        out[1:] += self.offdiag * psi[:-1]
        return out  # type: ignore[no-any-return]

    def max_row_sum(self) -> float:
        """Induced infinity norm ``max_n sum_m |H_nm|``"""
        row = np.abs(self.diag).copy()
        row[:-1] += np.abs(self.offdiag)
        row[1:] += np.abs(self.offdiag)
        return float(row.max())


def build_chain_hamiltonian(params: JCParams, chain: Union[ChainId, str]) -> ChainHamiltonian:
    """Tridiagonal Hamiltonian of chain C or F

    The lattice is semi-infinite and truncated after site ``N - 1``: the bond
    ``kappa_{N-1}`` is dropped.
    """
    chain = ChainId.parse(chain)
    n_sites = params.n_sites
    diag = chain_diagonal(n_sites, params.omega, params.omega0, chain)
    offdiag = np.asarray(coupling(np.arange(n_sites - 1), params.g), dtype=float)
    return ChainHamiltonian(diag=diag, offdiag=offdiag, chain=chain)


def build_product_hamiltonian(params: JCParams) -> NDArray[np.float64]:
    """Dense ``2N x 2N`` Hamiltonian in the interleaved product basis

    Photon numbers are truncated to ``0..N-1``; matrix elements of ``a`` and
    ``a^dag`` leaving that range are dropped.
    """
    n_sites = params.n_sites
    n = np.arange(n_sites)
    ham = np.zeros((2 * n_sites, 2 * n_sites))
    e_idx, g_idx = 2 * n, 2 * n + 1
    ham[e_idx, e_idx] = _site_energy(np.ones(n_sites), n, params.omega, params.omega0)
    ham[g_idx, g_idx] = _site_energy(-np.ones(n_sites), n, params.omega, params.omega0)

    kappa = np.asarray(coupling(n[:-1], params.g), dtype=float)
    # sigma_x (a + a^dag): |e,n> <-> |g,n+1> and |g,n> <-> |e,n+1>
    for src, dst in ((e_idx[:-1], g_idx[1:]), (g_idx[:-1], e_idx[1:])):
        ham[src, dst] = kappa
        ham[dst, src] = kappa
    return ham


def parity_permutation(n_sites: int) -> NDArray[np.int64]:
    """Product-basis indices ordered as ``[c_0..c_{N-1}, f_0..f_{N-1}]``"""
    n = np.arange(n_sites)
    even = n % 2 == 0
    c_idx = np.where(even, 2 * n, 2 * n + 1)
    f_idx = np.where(even, 2 * n + 1, 2 * n)
    return np.concatenate([c_idx, f_idx])  # type: ignore[no-any-return]


class Basis(str, enum.Enum):
    PRODUCT = "product"
    CHAIN = "chain"


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Complex amplitudes over a truncated basis.

    Attributes:
        amps (NDArray): Amplitudes, interleaved ``[a_0, b_0, ...]`` in the
            product basis or ``c_n``/``f_n`` in a chain basis.
        basis (Basis): Product or chain basis.
        chain (Optional[ChainId]): The chain for chain-basis vectors.

    """

    amps: NDArray[np.complex128]
    basis: Basis = Basis.CHAIN
    chain: Optional[ChainId] = field(default=ChainId.F)

    def __post_init__(self) -> None:
        amps = np.asarray(self.amps, dtype=complex)
        if amps.ndim != 1:
            msg = f"State amplitudes must be one-dimensional, got shape {amps.shape}"
            raise ValueError(msg)
        object.__setattr__(self, "amps", amps)
        if self.basis is Basis.PRODUCT:
            if amps.size % 2:
                msg = f"Product-basis state needs an even length, got {amps.size}"
                raise ValueError(msg)
            object.__setattr__(self, "chain", None)
        elif self.chain is None:
            msg = "Chain-basis state needs a chain tag"
            raise ValueError(msg)
        else:
            object.__setattr__(self, "chain", ChainId.parse(self.chain))

    @property
    def n_sites(self) -> int:
        return self.amps.size // 2 if self.basis is Basis.PRODUCT else self.amps.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(float(np.vdot(self.amps, self.amps).real) - 1.0) <= tol

    def normalized(self) -> StateVector:
        norm = self.norm
        if norm == 0:
            msg = "Cannot normalise the zero vector"
            raise ValueError(msg)
        return StateVector(self.amps / norm, self.basis, self.chain)

    def overlap(self, other: StateVector) -> complex:
        """``<self|other>``"""
        return complex(np.vdot(self.amps, other.amps))


def basis_state(n_sites: int, site: int, chain: Union[ChainId, str] = ChainId.F) -> StateVector:
    """Unit excitation of one waveguide of a chain"""
    if not 0 <= site < n_sites:
        msg = f"Site {site} outside chain of {n_sites} sites"
        raise ValueError(msg)
    amps = np.zeros(n_sites, dtype=complex)
    amps[site] = 1.0
    return StateVector(amps, Basis.CHAIN, ChainId.parse(chain))


def product_basis_state(n_sites: int, qubit: str, n: int) -> StateVector:
    """``|e>|n>`` or ``|g>|n>`` in the interleaved product basis"""
    if qubit not in ("e", "g"):
        msg = f"Qubit state must be 'e' or 'g', got {qubit!r}"
        raise ValueError(msg)
    if not 0 <= n < n_sites:
        msg = f"Photon number {n} outside truncation 0..{n_sites - 1}"
        raise ValueError(msg)
    amps = np.zeros(2 * n_sites, dtype=complex)
    amps[2 * n + (0 if qubit == "e" else 1)] = 1.0
    return StateVector(amps, Basis.PRODUCT)


def product_to_chains(
    state: StateVector, n_sites: Optional[int] = None
) -> Tuple[StateVector, StateVector]:
    """Split a product-basis state into its chain C and chain F components"""
    if state.basis is not Basis.PRODUCT:
        msg = "product_to_chains expects a product-basis state"
        raise ValueError(msg)
    if n_sites is not None and state.amps.size != 2 * n_sites:
        msg = f"Expected product state of length {2 * n_sites}, got {state.amps.size}"
        raise ValueError(msg)
    n_sites = state.n_sites
    reordered = state.amps[parity_permutation(n_sites)]
    return (
        StateVector(reordered[:n_sites], Basis.CHAIN, ChainId.C),
        StateVector(reordered[n_sites:], Basis.CHAIN, ChainId.F),
    )


def chains_to_product(chain_c: StateVector, chain_f: StateVector) -> StateVector:
    """Inverse of :func:`product_to_chains`"""
    if chain_c.chain is not ChainId.C or chain_f.chain is not ChainId.F:
        msg = "chains_to_product expects a chain C and a chain F state, in that order"
        raise ValueError(msg)
    if chain_c.amps.size != chain_f.amps.size:
        msg = f"Chain lengths differ: {chain_c.amps.size} vs {chain_f.amps.size}"
        raise ValueError(msg)
    n_sites = chain_c.amps.size
    amps = np.empty(2 * n_sites, dtype=complex)
    amps[parity_permutation(n_sites)] = np.concatenate([chain_c.amps, chain_f.amps])
    return StateVector(amps, Basis.PRODUCT)


def chain_block_diagonal(params: JCParams) -> NDArray[np.float64]:
    """Direct sum ``H_C (+) H_F`` of the two chain Hamiltonians"""
    return block_diag(  # type: ignore[no-any-return]
        build_chain_hamiltonian(params, ChainId.C).to_dense(),
        build_chain_hamiltonian(params, ChainId.F).to_dense(),
    )
