from __future__ import annotations

import json
import math

import numpy as np
import pandas as pd
import pytest

from jclattice.cli import exit_code, main
from jclattice.config import load_config
from jclattice.exceptions import (
    ConfigurationError,
    ConvergenceError,
    EigensolverError,
    InfeasibleDesignError,
    JCLatticeError,
    UnitError,
)
from jclattice.io import file_checksum
from jclattice.runner import oracle_report, run_scenario


def first_line(path):
    with open(path, newline="") as fh:
        return fh.readline()


def test_simulate_fig2(tmp_path):
    assert main(["simulate", "--preset", "fig2", "--out", str(tmp_path)]) == 0
    assert first_line(tmp_path / "observables.csv") == "omega_t,p_g,p_e,p_rev\n"
    header = first_line(tmp_path / "photon_distribution.csv").strip().split(",")
    assert header[:3] == ["omega_t", "n_0", "n_1"]
    assert (tmp_path / "heatmap.svg").read_text().lstrip().startswith("<?xml")
    assert (tmp_path / "curves.svg").exists()

    frame = pd.read_csv(tmp_path / "observables.csv")
    assert len(frame) == 301
    revival = frame.loc[np.isclose(frame["omega_t"], 2 * math.pi)]
    assert revival["p_rev"].iloc[0] >= 1 - 1e-8
    assert frame["p_rev"].min() <= 1e-6

    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["results"]["truncation"] == 64
    assert manifest["config"]["g_over_omega"] == 2.0
    assert manifest["outputs"]["observables.csv"] == file_checksum(tmp_path / "observables.csv")
    assert set(manifest["outputs"]) == {
        "observables.csv",
        "photon_distribution.csv",
        "heatmap.svg",
        "curves.svg",
    }


def test_outputs_are_deterministic(tmp_path):
    args = ["simulate", "--preset", "fig3", "--set", "truncation=64", "--out", str(tmp_path), "--format", "csv,json"]
    assert main(args) == 0
    first = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    assert main(args) == 0
    second = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    assert set(first) == {"observables.csv", "photon_distribution.csv", "manifest.json"}
    assert first == second
    assert b"\r\n" not in first["observables.csv"]

    peak = json.loads(first["manifest.json"])["results"]["revival_peak"]
    assert 0 < peak < 0.999


def test_format_selection(tmp_path):
    assert main(["simulate", "--set", "truncation=16", "--set", "g_over_omega=0.5", "--out", str(tmp_path), "--format", "csv"]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["observables.csv", "photon_distribution.csv"]


def test_spectrum(tmp_path):
    assert main(["spectrum", "--set", "g_over_omega=2", "--set", "omega0_over_omega=0", "--out", str(tmp_path)]) == 0
    assert first_line(tmp_path / "spectrum.csv") == "level,energy,spacing,ladder,abs_diff\n"
    frame = pd.read_csv(tmp_path / "spectrum.csv")
    assert len(frame) == 10
    assert frame["abs_diff"].max() < 1e-6
    np.testing.assert_allclose(frame["spacing"].iloc[1:], 1.0, atol=1e-8)


def test_design_example(tmp_path):
    assert main(["design", "--preset", "design-example", "--out", str(tmp_path)]) == 0
    assert first_line(tmp_path / "geometry.csv") == "n,position,spacing,coupling,detuning\n"
    frame = pd.read_csv(tmp_path / "geometry.csv")
    assert len(frame) == 25
    np.testing.assert_allclose(frame["spacing"].iloc[:3], [9.54, 8.80, 8.37], rtol=5e-3)
    assert np.isnan(frame["spacing"].iloc[-1])

    record = json.loads((tmp_path / "design.json").read_text())
    assert record["derived"]["revival_length"] == pytest.approx(43700, rel=5e-3)


def test_oracle_report(tmp_path):
    config = load_config(preset="fig2", overrides=["horizon_periods=2", "samples=400"])
    frame = oracle_report(config)
    assert list(frame.columns) == ["omega_t", "observable", "numeric", "oracle", "abs_diff"]
    assert set(frame["observable"]) >= {"p_rev", "p_g", "mean_photon", "p_n0"}
    assert frame["abs_diff"].max() < 1e-8

    trivial = oracle_report(load_config(overrides=["g_over_omega=0"]))
    assert trivial["abs_diff"].max() < 1e-12

    assert main(["report", "--preset", "fig2", "--out", str(tmp_path)]) == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert max(manifest["results"]["max_abs_diff"].values()) < 1e-8
    assert manifest["results"]["truncation"] == 64
    assert frame.attrs["truncation"] == 64


def test_rwa_mode(tmp_path):
    config = load_config(
        overrides=[
            "mode=rwa",
            "chain=C",
            "omega=1",
            "omega0_over_omega=1",
            "g_over_omega=0.01",
            "rwa.site=2",
            "rwa.periods=4",
            "samples=801",
            "truncation=16",
            f"output.dir={tmp_path}",
        ]
    )
    result = run_scenario(config)
    assert result.results["frequency_rel_error"] < 0.01
    assert result.results["amplitude_rel_error"] < 0.01
    assert first_line(result.outputs["rwa"]) == "omega_t,p_lower,p_upper,rwa_lower,rwa_upper\n"

    with pytest.raises(ConfigurationError):
        run_scenario(config.updated(chain="F"))


def test_sweep(tmp_path):
    config = load_config(
        overrides=[
            "mode=sweep",
            "sweep.g_over_omega=0,0.5",
            "sweep.omega0_over_omega=0,0.3",
            "truncation=32",
            "horizon_periods=1",
            "samples=51",
            "output.formats=csv",
        ]
    )
    result = run_scenario(config, tmp_path)
    frame = pd.read_csv(result.outputs["sweep"])
    assert len(frame) == 4
    assert list(frame.columns) == ["g_over_omega", "omega0_over_omega", "truncation", "p_rev_min", "revival_peak"]
    assert (tmp_path / "g0.5_w0.3" / "observables.csv").exists()
    no_coupling = frame.loc[frame["g_over_omega"] == 0]
    np.testing.assert_allclose(no_coupling["p_rev_min"], 1.0, atol=1e-12)


@pytest.mark.parametrize(
    ("args", "code"),
    [
        (["report", "--preset", "fig3"], 2),
        (["simulate", "--set", "nonsense=1"], 2),
        (["simulate", "--set", "samples=1"], 2),
        (
            [
                "rwa",
                "--set",
                "chain=C",
                "--set",
                "g_over_omega=0.01",
                "--set",
                "omega0_over_omega=1",
                "--set",
                "samples=4",
                "--set",
                "truncation=16",
            ],
            2,
        ),
        (["design", "--preset", "design-example", "--set", "g_over_omega=200"], 4),
        (["design", "--preset", "design-example", "--set", "fab.unit=parsec"], 2),
    ],
)
def test_exit_codes(tmp_path, args, code):
    assert main([*args, "--out", str(tmp_path)]) == code


def test_bad_config_file_exit_code(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("samples = 11\nfrequency = 3\n")
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path)]) == 2


def test_exit_code_mapping():
    assert exit_code(ConfigurationError("x")) == 2
    assert exit_code(UnitError("x")) == 2
    assert exit_code(ConvergenceError("x", cap=16)) == 3
    assert exit_code(EigensolverError("x")) == 3
    assert exit_code(InfeasibleDesignError("x", n=0)) == 4
    assert exit_code(JCLatticeError("x")) == 1


def test_argument_errors():
    with pytest.raises(SystemExit):
        main([])
    with pytest.raises(SystemExit):
        main(["simulate", "--format", "png"])


def test_rwa_needs_enough_samples_for_the_fit(tmp_path):
    config = load_config(
        overrides=["mode=rwa", "chain=C", "omega0_over_omega=1", "g_over_omega=0.01", "samples=4", "truncation=16"]
    )
    with pytest.raises(ConfigurationError) as excinfo:
        run_scenario(config, tmp_path)
    assert excinfo.value.field == "samples"
    assert not any(tmp_path.iterdir())
