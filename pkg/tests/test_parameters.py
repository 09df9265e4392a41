from __future__ import annotations

import math

import numpy as np
import pytest

from jclattice.parameters import ChainId, JCParams, TimeGrid, create_params, revival_period


def test_create_params():
    # Test case 1: defaults
    result = create_params()
    assert result.omega == 1.0
    assert result.omega0 == 0.0
    assert result.g == 0.0
    assert result.n_sites == 64

    # Test case 2: ratios as a tuple
    result = create_params(var=(2, 0.3))
    assert result.g == 2.0
    assert result.omega0 == pytest.approx(0.3)
    assert result.n_sites == 64

    # Test case 3: tuple with truncation, keyword ratios win
    result = create_params(var=(2, 0.3, 32), g_over_omega=0.5, omega=2.0)
    assert result.g == 1.0
    assert result.omega0 == pytest.approx(0.6)
    assert result.n_sites == 32
    assert result.g_over_omega == 0.5
    assert result.omega0_over_omega == pytest.approx(0.3)

    # Test case 4: existing parameters pass through
    params = JCParams(omega=1.0, omega0=0.3, g=2.0, n_sites=16)
    assert create_params(params) is params


@pytest.mark.parametrize(
    "kwds",
    [
        {"omega": 0.0},
        {"omega": -1.0},
        {"omega0": -0.1},
        {"g": -1.0},
        {"n_sites": 1},
        {"n_sites": 2.5},
    ],
)
def test_JCParams_rejects_invalid(kwds):
    with pytest.raises(ValueError):
        JCParams(**kwds)


def test_JCParams_period_and_sites():
    params = JCParams(omega=2.0, g=1.0, n_sites=8)
    assert params.period == pytest.approx(math.pi)
    assert revival_period(1.0) == pytest.approx(2 * math.pi)
    resized = params.with_sites(32)
    assert resized.n_sites == 32
    assert resized.g == params.g
    assert params.n_sites == 8


def test_ChainId():
    assert ChainId.parse("c") is ChainId.C
    assert ChainId.parse(" F ") is ChainId.F
    assert ChainId.parse(ChainId.C) is ChainId.C
    assert ChainId.C.sign == 1
    assert ChainId.F.sign == -1
    assert ChainId.C.other is ChainId.F
    with pytest.raises(ValueError, match="Unknown chain"):
        ChainId.parse("X")


def test_TimeGrid():
    grid = TimeGrid(0.0, 1.0, 11)
    assert grid.times[0] == 0.0
    assert grid.times[-1] == 1.0
    assert grid.spacing == pytest.approx(0.1)
    np.testing.assert_allclose(np.diff(grid.times), 0.1)

    grid = TimeGrid.periods(omega=1.0, n_periods=1.5, n_samples=301)
    assert grid.t_end == pytest.approx(3 * math.pi)
    assert grid.times[200] == pytest.approx(2 * math.pi)

    with pytest.raises(ValueError):
        TimeGrid(1.0, 1.0, 10)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, 1)
