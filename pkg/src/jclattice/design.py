"""Waveguide-array design

Maps the chain Hamiltonian onto a circularly curved array of waveguides:

* the bending radius R and horizontal pitch a produce the index gradient
  ``omega = 2 pi n_s a / (R lambda)``, so the revival length is
  ``T = 2 pi / omega``;
* the couplings ``kappa_n = g sqrt(n + 1)`` are realised through the
  exponential coupling law ``kappa = A exp(-gamma d)``, i.e. spacings
  ``d_n = ln(A / kappa_n) / gamma``;
* the qubit splitting becomes an alternating propagation-constant mismatch
  ``±(-1)^n omega0 / 2`` between neighbouring guides.

Every function works in one declared length unit (micrometres unless told
otherwise); inverse lengths are per that unit. The coupling law is used as an
exact relation.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import constants

from .exceptions import ConfigurationError, InfeasibleDesignError, UnitError
from .model import chain_diagonal, coupling
from .parameters import ChainId, JCParams, create_params

__all__ = [
    "LENGTH_UNITS",
    "FabricationConstants",
    "WaveguideGeometry",
    "convert_inverse_length",
    "convert_length",
    "coupling_from_spacing",
    "design_array",
    "design_record",
    "index_gradient",
    "physical_params",
    "spacing_from_coupling",
]

logger = logging.getLogger(__name__)

BASE_UNIT = "um"

LENGTH_UNITS: Dict[str, float] = {
    "nm": constants.nano,
    "um": constants.micro,
    "mm": constants.milli,
    "cm": constants.centi,
    "m": 1.0,
}

OMEGA_RTOL = 1e-3


def _unit_factor(unit: str) -> float:
    try:
        return LENGTH_UNITS[unit]
    except KeyError:
        msg = f"Unknown length unit {unit!r}; use one of {sorted(LENGTH_UNITS)}"
        raise UnitError(msg) from None


def convert_length(value: ArrayLike, from_unit: str, to_unit: str) -> Any:
    """Convert a length between units"""
    return np.asarray(value, dtype=float) * (_unit_factor(from_unit) / _unit_factor(to_unit))


def convert_inverse_length(value: ArrayLike, from_unit: str, to_unit: str) -> Any:
    """Convert an inverse length (rate per unit length) between units"""
    return np.asarray(value, dtype=float) * (_unit_factor(to_unit) / _unit_factor(from_unit))


def _scalar(value: Any) -> float:
    return float(value)


@dataclass(frozen=True)
class FabricationConstants:
    """
    Fabrication constants of femtosecond-laser written guides in fused silica.

    Attributes:
        A (float): Coupling prefactor, per ``unit``.
        gamma (float): Coupling decay rate, per ``unit``.
        n_s (float): Substrate refractive index.
        wavelength (float): Vacuum wavelength, in ``unit``.
        unit (str): Declared length unit.
        core_diameter (float): Guide core diameter, in ``unit`` (metadata only).
        index_change (float): Core index contrast (metadata only).

    """

    A: float = 24.6e-3
    gamma: float = 0.466
    n_s: float = 1.45
    wavelength: float = 0.633
    unit: str = BASE_UNIT
    core_diameter: float = 5.0
    index_change: float = 0.002

    def __post_init__(self) -> None:
        _unit_factor(self.unit)
        for name in ("A", "gamma", "n_s", "wavelength", "core_diameter", "index_change"):
            if not getattr(self, name) > 0:
                msg = f"Fabrication constant {name} must be positive, got {getattr(self, name)}"
                raise ValueError(msg)

    def to_unit(self, unit: str) -> FabricationConstants:
        """Same constants expressed in another length unit"""
        if unit == self.unit:
            return self
        return replace(
            self,
            A=_scalar(convert_inverse_length(self.A, self.unit, unit)),
            gamma=_scalar(convert_inverse_length(self.gamma, self.unit, unit)),
            wavelength=_scalar(convert_length(self.wavelength, self.unit, unit)),
            core_diameter=_scalar(convert_length(self.core_diameter, self.unit, unit)),
            unit=unit,
        )


def _check_unit(fab: FabricationConstants, unit: str) -> None:
    _unit_factor(unit)
    if fab.unit != unit:
        msg = (
            f"Fabrication constants are declared in {fab.unit!r} but the call uses {unit!r}; "
            f"convert them with fab.to_unit({unit!r})"
        )
        raise UnitError(msg)


def index_gradient(fab: FabricationConstants, a: float, R: float, unit: str = BASE_UNIT) -> float:
    """``omega = 2 pi n_s a / (R lambda)`` per ``unit``

    Args:
        fab: Fabrication constants declared in ``unit``
        a: Horizontal waveguide pitch
        R: Bending radius of the array axis
        unit: Length unit of ``a``, ``R`` and ``fab``
    """
    _check_unit(fab, unit)
    if not (a > 0 and R > 0):
        msg = f"Pitch and radius must be positive, got a={a}, R={R}"
        raise ValueError(msg)
    return 2.0 * math.pi * fab.n_s * a / (R * fab.wavelength)


def spacing_from_coupling(kappa: ArrayLike, fab: FabricationConstants, unit: str = BASE_UNIT) -> Any:
    """Spacing ``d = ln(A / kappa) / gamma`` realising the coupling ``kappa``

    Raises:
        InfeasibleDesignError: if ``kappa >= A`` (no positive spacing exists)
    """
    _check_unit(fab, unit)
    kappa_arr = np.asarray(kappa, dtype=float)
    if np.any(kappa_arr <= 0):
        msg = f"Coupling must be positive, got {kappa}"
        raise ValueError(msg)
    infeasible = np.flatnonzero(np.atleast_1d(kappa_arr) >= fab.A)
    if infeasible.size:
        first = int(infeasible[0])
        msg = (
            f"Coupling {np.atleast_1d(kappa_arr)[first]:.6g} per {unit} reaches the prefactor "
            f"A = {fab.A:.6g} per {unit}: no positive spacing exists"
        )
        raise InfeasibleDesignError(msg, n=first if kappa_arr.ndim else None)
    d = np.log(fab.A / kappa_arr) / fab.gamma
    return float(d) if d.ndim == 0 else d


def coupling_from_spacing(d: ArrayLike, fab: FabricationConstants, unit: str = BASE_UNIT) -> Any:
    """Coupling ``kappa = A exp(-gamma d)`` of two guides at spacing ``d``"""
    _check_unit(fab, unit)
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr <= 0):
        msg = f"Spacing must be positive, got {d}"
        raise ValueError(msg)
    kappa = fab.A * np.exp(-fab.gamma * d_arr)
    return float(kappa) if kappa.ndim == 0 else kappa


@dataclass(frozen=True, eq=False)
class WaveguideGeometry:
    """
    Physical layout of one parity chain as a curved waveguide array.

    Attributes:
        R (float): Bending radius.
        a (float): Horizontal pitch.
        spacings (NDArray): Gaps ``d_n`` between guides n and n + 1, length N - 1.
        n_guides (int): Number of guides N.
        unit (str): Length unit of all lengths.
        couplings (NDArray): Realised couplings ``kappa_n``, per unit.
        detunings (NDArray): Propagation-constant offsets per guide, per unit.
        omega (float): Index gradient, per unit.
        diagnostics (Tuple[str, ...]): Non-fatal design warnings.

    """

    R: float
    a: float
    spacings: NDArray[np.float64]
    n_guides: int
    unit: str = BASE_UNIT
    couplings: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))
    detunings: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))
    omega: float = math.nan
    diagnostics: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.spacings.shape != (self.n_guides - 1,):
            msg = f"{self.n_guides} guides need {self.n_guides - 1} spacings, got {self.spacings.size}"
            raise ValueError(msg)
        if np.any(self.spacings <= 0):
            msg = "All spacings must be positive"
            raise InfeasibleDesignError(msg, n=int(np.flatnonzero(self.spacings <= 0)[0]))
        if self.spacings.size > 1 and np.any(np.diff(self.spacings) >= 0):
            msg = "Spacings must decrease strictly along the array"
            raise ValueError(msg)

    @property
    def positions(self) -> NDArray[np.float64]:
        """Transverse guide positions, guide 0 at the origin"""
        return np.concatenate([[0.0], np.cumsum(self.spacings)])  # type: ignore[no-any-return]

    @property
    def width(self) -> float:
        return float(self.spacings.sum())

    @property
    def revival_length(self) -> float:
        """Propagation distance ``2 pi / omega`` of one Bloch period"""
        return 2.0 * math.pi / self.omega


def physical_params(
    params: JCParams, fab: FabricationConstants, R: float, a: float, unit: str = BASE_UNIT
) -> JCParams:
    """Scale dimensionless parameters so that ``omega`` is the index gradient of the geometry"""
    omega = index_gradient(fab, a, R, unit)
    return create_params(
        g_over_omega=params.g_over_omega,
        omega0_over_omega=params.omega0_over_omega,
        omega=omega,
        n_sites=params.n_sites,
    )


def design_array(
    params: JCParams,
    fab: FabricationConstants,
    R: float,
    a: float,
    unit: str = BASE_UNIT,
    strict: bool = False,
    chain: Union[ChainId, str] = ChainId.F,
) -> WaveguideGeometry:
    """Spacings realising ``kappa_n = g sqrt(n + 1)`` for ``n < N - 1``

    ``params`` carry physical frequencies per ``unit``; use
    :func:`physical_params` to obtain them from ratios.

    Raises:
        InfeasibleDesignError: if some ``kappa_n >= A`` (naming the first n),
            or if ``strict`` and the geometric index gradient differs from
            ``params.omega`` by more than 0.1%
    """
    _check_unit(fab, unit)
    n_guides = params.n_sites
    kappas = np.asarray(coupling(np.arange(n_guides - 1), params.g), dtype=float)
    if np.any(kappas <= 0):
        msg = "A design needs g > 0"
        raise ConfigurationError(msg, field="g_over_omega")
    too_strong = np.flatnonzero(kappas >= fab.A)
    if too_strong.size:
        first = int(too_strong[0])
        msg = (
            f"kappa_{first} = {kappas[first]:.6g} per {unit} reaches A = {fab.A:.6g} per {unit}; "
            f"bond {first} cannot be realised"
        )
        raise InfeasibleDesignError(msg, n=first)
    spacings = np.asarray(spacing_from_coupling(kappas, fab, unit), dtype=float)

    omega_geometry = index_gradient(fab, a, R, unit)
    diagnostics = []
    mismatch = abs(omega_geometry - params.omega) / params.omega
    if mismatch > OMEGA_RTOL:
        msg = (
            f"Index gradient of the geometry {omega_geometry:.6g} per {unit} differs from "
            f"omega = {params.omega:.6g} per {unit} by {100 * mismatch:.3g}%"
        )
        if strict:
            raise InfeasibleDesignError(msg)
        logger.warning(msg)
        diagnostics.append(msg)

    detunings = chain_diagonal(n_guides, 0.0, params.omega0, ChainId.parse(chain))
    return WaveguideGeometry(
        R=R,
        a=a,
        spacings=spacings,
        n_guides=n_guides,
        unit=unit,
        couplings=kappas,
        detunings=detunings,
        omega=omega_geometry,
        diagnostics=tuple(diagnostics),
    )


def design_record(
    geometry: WaveguideGeometry, params: JCParams, fab: FabricationConstants
) -> Dict[str, Any]:
    """JSON-ready description of a design with its provenance"""
    return {
        "unit": geometry.unit,
        "fabrication": asdict(fab),
        "params": asdict(params),
        "geometry": {
            "R": geometry.R,
            "a": geometry.a,
            "n_guides": geometry.n_guides,
            "spacings": geometry.spacings.tolist(),
            "positions": geometry.positions.tolist(),
            "couplings": geometry.couplings.tolist(),
            "detunings": geometry.detunings.tolist(),
            "width": geometry.width,
        },
        "derived": {
            "omega": geometry.omega,
            "g": params.g,
            "revival_length": geometry.revival_length,
        },
        "diagnostics": list(geometry.diagnostics),
    }
