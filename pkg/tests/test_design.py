from __future__ import annotations

import logging
import math

import numpy as np
import pytest

from jclattice.design import (
    FabricationConstants,
    convert_inverse_length,
    convert_length,
    coupling_from_spacing,
    design_array,
    design_record,
    index_gradient,
    physical_params,
    spacing_from_coupling,
)
from jclattice.exceptions import InfeasibleDesignError, UnitError
from jclattice.parameters import ChainId, JCParams, create_params

R_UM = 60e4
A_UM = 6.0


@pytest.fixture
def fab():
    return FabricationConstants()


def test_unit_conversion():
    assert convert_length(4.3655, "cm", "um") == pytest.approx(43655.0)
    assert convert_length(633.0, "nm", "um") == pytest.approx(0.633)
    assert convert_inverse_length(24.6, "mm", "um") == pytest.approx(0.0246)
    assert convert_inverse_length(0.466, "um", "m") == pytest.approx(466000.0)
    with pytest.raises(UnitError):
        convert_length(1.0, "inch", "um")


def test_FabricationConstants(fab):
    in_mm = fab.to_unit("mm")
    assert in_mm.A == pytest.approx(24.6)
    assert in_mm.gamma == pytest.approx(466.0)
    assert in_mm.wavelength == pytest.approx(633e-6)
    assert in_mm.core_diameter == pytest.approx(5e-3)
    assert in_mm.index_change == fab.index_change
    assert fab.to_unit("um") is fab
    with pytest.raises(ValueError):
        FabricationConstants(A=0.0)
    with pytest.raises(UnitError):
        FabricationConstants(unit="furlong")


def test_design_table(fab):
    omega = index_gradient(fab, A_UM, R_UM)
    params = physical_params(create_params(g_over_omega=2.0, n_sites=25), fab, R_UM, A_UM)
    assert params.omega == pytest.approx(omega)
    geometry = design_array(params, fab, R_UM, A_UM)

    assert convert_inverse_length(omega, "um", "mm") == pytest.approx(0.1439, rel=5e-3)
    assert convert_length(geometry.revival_length, "um", "cm") == pytest.approx(4.37, rel=5e-3)
    assert convert_inverse_length(params.g, "um", "mm") == pytest.approx(0.288, rel=5e-3)
    np.testing.assert_allclose(geometry.spacings[:3], [9.54, 8.80, 8.37], rtol=5e-3)

    assert geometry.n_guides == 25
    assert geometry.spacings.size == 24
    assert np.all(np.diff(geometry.spacings) < 0)
    assert geometry.positions[0] == 0.0
    assert geometry.positions[-1] == pytest.approx(geometry.width)
    assert geometry.diagnostics == ()
    np.testing.assert_allclose(coupling_from_spacing(geometry.spacings, fab), geometry.couplings)
    np.testing.assert_allclose(geometry.detunings, 0.0)


def test_design_is_unit_independent(fab):
    fab_mm = fab.to_unit("mm")
    base = create_params(g_over_omega=2.0, n_sites=5)
    in_um = design_array(physical_params(base, fab, R_UM, A_UM), fab, R_UM, A_UM)
    in_mm = design_array(physical_params(base, fab_mm, 600.0, 6e-3, "mm"), fab_mm, 600.0, 6e-3, unit="mm")
    np.testing.assert_allclose(convert_length(in_mm.spacings, "mm", "um"), in_um.spacings, rtol=1e-12)
    with pytest.raises(UnitError, match="to_unit"):
        index_gradient(fab, 6e-3, 600.0, unit="mm")


def test_detuning_alternates(fab):
    omega = index_gradient(fab, A_UM, R_UM)
    params = JCParams(omega=omega, omega0=0.3 * omega, g=2 * omega, n_sites=4)
    geometry = design_array(params, fab, R_UM, A_UM, chain=ChainId.F)
    np.testing.assert_allclose(geometry.detunings, 0.15 * omega * np.array([-1, 1, -1, 1]))
    geometry = design_array(params, fab, R_UM, A_UM, chain="C")
    np.testing.assert_allclose(geometry.detunings, 0.15 * omega * np.array([1, -1, 1, -1]))


def test_spacing_from_coupling(fab):
    d = spacing_from_coupling(1e-3, fab)
    assert isinstance(d, float)
    assert d == pytest.approx(math.log(24.6) / 0.466)
    assert coupling_from_spacing(d, fab) == pytest.approx(1e-3)
    with pytest.raises(InfeasibleDesignError):
        spacing_from_coupling(fab.A, fab)
    with pytest.raises(ValueError):
        spacing_from_coupling(0.0, fab)
    with pytest.raises(ValueError):
        coupling_from_spacing(-1.0, fab)


def test_infeasible_design_names_first_bond(fab):
    omega = index_gradient(fab, A_UM, R_UM)
    params = JCParams(omega=omega, g=0.01, n_sites=10)
    with pytest.raises(InfeasibleDesignError) as excinfo:
        design_array(params, fab, R_UM, A_UM)
    assert excinfo.value.n == 6
    assert "kappa_6" in str(excinfo.value)

    params = JCParams(omega=omega, g=200 * omega, n_sites=10)
    with pytest.raises(InfeasibleDesignError) as excinfo:
        design_array(params, fab, R_UM, A_UM)
    assert excinfo.value.n == 0


def test_omega_mismatch(fab, caplog):
    omega = index_gradient(fab, A_UM, R_UM)
    params = JCParams(omega=1.01 * omega, g=2 * omega, n_sites=5)
    with caplog.at_level(logging.WARNING):
        geometry = design_array(params, fab, R_UM, A_UM)
    assert len(geometry.diagnostics) == 1
    assert "differs" in caplog.text
    with pytest.raises(InfeasibleDesignError, match="differs"):
        design_array(params, fab, R_UM, A_UM, strict=True)


def test_design_record(fab):
    params = physical_params(create_params(g_over_omega=2.0, n_sites=4), fab, R_UM, A_UM)
    geometry = design_array(params, fab, R_UM, A_UM)
    record = design_record(geometry, params, fab)
    assert record["unit"] == "um"
    assert record["fabrication"]["core_diameter"] == 5.0
    assert record["fabrication"]["index_change"] == 0.002
    assert len(record["geometry"]["spacings"]) == 3
    assert record["derived"]["revival_length"] == pytest.approx(2 * math.pi / params.omega)
