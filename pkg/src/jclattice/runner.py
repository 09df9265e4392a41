"""
Scenario execution

:class:`ScenarioRunner` turns a :class:`~jclattice.config.ScenarioConfig`
into output files: observables and photon statistics for ``simulate``, the
low-lying chain spectrum for ``spectrum``, a rotating-wave comparison for
``rwa``, the waveguide layout for ``design`` and a parameter grid of
simulations for ``sweep``. :func:`oracle_report` compares a simulation with
the closed-form degenerate-qubit dynamics.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from .config import ScenarioConfig
from .design import convert_inverse_length, convert_length, design_array, design_record, physical_params
from .exceptions import ConfigurationError
from .io import geometry_frame, manifest, observables_frame, photon_frame, write_csv, write_json
from .model import basis_state, build_chain_hamiltonian
from .observables import ObservableSeries, extract_observables, revival_peak
from .oracles import (
    FIT_MIN_SAMPLES,
    DscClosedForm,
    fit_rabi_oscillation,
    rabi_frequency,
    rwa_detuning,
    rwa_rabi,
    wannier_stark_energies,
)
from .parameters import ChainId, JCParams, TimeGrid, create_params
from .plotting import Plotter
from .propagate import NORM_TOL, chain_spectrum, choose_truncation, level_spacings, spectral_propagate
from .utils import ClassLoggingMixin

__all__ = [
    "RunResult",
    "ScenarioRunner",
    "oracle_report",
    "resolve_truncation",
    "run_scenario",
    "simulate_chain",
]

SPECTRUM_SITES = 400
REPORT_SLICES = 8


@dataclass(frozen=True)
class RunResult:
    """Files written by a run and its summary numbers"""

    mode: str
    outputs: Dict[str, Path] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)


def resolve_truncation(
    config: ScenarioConfig,
    horizon: float,
    initial_site: int,
    chain: Optional[Union[ChainId, str]] = None,
) -> int:
    """Explicit truncation of the scenario, or the automatically converged one"""
    if config.truncation is not None:
        return config.truncation
    return choose_truncation(
        config.params(),
        horizon=horizon,
        tail_tol=config.tail_tol,
        chain=chain or config.chain,
        initial_site=initial_site,
    )


def simulate_chain(
    params: JCParams, chain: Union[ChainId, str], initial_site: int, grid: TimeGrid
) -> ObservableSeries:
    """Observables after exciting one site of a chain"""
    chain = ChainId.parse(chain)
    traj = spectral_propagate(
        build_chain_hamiltonian(params, chain),
        basis_state(params.n_sites, initial_site, chain),
        grid,
    )
    return extract_observables(traj, chain)


def oracle_report(config: ScenarioConfig) -> pd.DataFrame:
    """Simulation against the closed-form dynamics for the input ``|g>|0>``

    Returns:
        One row per sample and observable with columns ``omega_t``,
        ``observable``, ``numeric``, ``oracle`` and ``abs_diff``; the
        truncation used is in ``attrs["truncation"]``

    Raises:
        ConfigurationError: if ``omega0 != 0`` or the input is not chain F site 0
    """
    if config.omega0_over_omega != 0:
        msg = (
            f"closed-form comparison needs omega0 = 0, got omega0/omega = {config.omega0_over_omega}; "
            "revivals are only approximate otherwise"
        )
        raise ConfigurationError(msg, field="omega0_over_omega")
    if config.chain is not ChainId.F or config.initial_site != 0:
        msg = "closed-form comparison describes |g>|0>, i.e. chain F site 0"
        raise ConfigurationError(msg, field="initial_site")

    horizon = config.horizon
    n_sites = resolve_truncation(config, horizon, 0, ChainId.F)
    params = config.params(n_sites)
    grid = TimeGrid(0.0, horizon, config.samples)
    series = simulate_chain(params, ChainId.F, 0, grid)
    oracle = DscClosedForm.from_params(params)

    times = grid.times
    p_g, _ = oracle.populations(times)
    compared = {
        "p_rev": (series.p_rev, oracle.revival_probability(times)),
        "p_g": (series.p_g, p_g),
        "mean_photon": (series.mean_photon, oracle.mean_photon(times)),
    }
    photon = oracle.photon_matrix(times, n_sites)
    for n in range(min(n_sites, REPORT_SLICES)):
        compared[f"p_n{n}"] = (series.photon_dist[:, n], photon[:, n])

    frames = []
    for name, (numeric, exact) in compared.items():
        numeric = np.asarray(numeric, dtype=float)
        exact = np.broadcast_to(np.asarray(exact, dtype=float), numeric.shape)
        frames.append(
            pd.DataFrame(
                {
                    "omega_t": params.omega * times,
                    "observable": name,
                    "numeric": numeric,
                    "oracle": exact,
                    "abs_diff": np.abs(numeric - exact),
                }
            )
        )
    report = pd.concat(frames, ignore_index=True)
    report.attrs["truncation"] = n_sites
    return report


class ScenarioRunner(ClassLoggingMixin):
    """Runs one scenario and writes its outputs below ``out_dir``"""

    def __init__(self, config: ScenarioConfig, out_dir: Optional[Union[str, Path]] = None) -> None:
        super().__init__()
        self.config = config
        self.out_dir = Path(out_dir if out_dir is not None else config.output_dir)
        self.modes = {
            "simulate": self.simulate,
            "spectrum": self.spectrum,
            "rwa": self.rwa,
            "design": self.design,
            "sweep": self.sweep,
        }

    def wants(self, fmt: str) -> bool:
        return fmt in self.config.output_formats

    def run(self) -> RunResult:
        self.info(f"Running {self.config.mode} into {self.out_dir}")
        return self.modes[self.config.mode]()

    def _finish(self, mode: str, outputs: Dict[str, Path], results: Dict[str, Any]) -> RunResult:
        if self.wants("json"):
            data = manifest(self.config.to_mapping(), outputs.values(), mode=mode, **results)
            outputs = {**outputs, "manifest": write_json(data, self.out_dir / "manifest.json")}
        return RunResult(mode=mode, outputs=outputs, results=results)

    def simulate(self) -> RunResult:
        cfg = self.config
        horizon = cfg.horizon
        n_sites = resolve_truncation(cfg, horizon, cfg.initial_site)
        params = cfg.params(n_sites)
        grid = TimeGrid(0.0, horizon, cfg.samples)
        series = simulate_chain(params, cfg.chain, cfg.initial_site, grid)

        outputs: Dict[str, Path] = {}
        if self.wants("csv"):
            outputs["observables"] = write_csv(
                observables_frame(series, params.omega), self.out_dir / "observables.csv"
            )
            outputs["photon_distribution"] = write_csv(
                photon_frame(series, params.omega), self.out_dir / "photon_distribution.csv"
            )
        if self.wants("svg"):
            heatmap = self.out_dir / "heatmap.svg"
            curves = self.out_dir / "curves.svg"
            Plotter(series, params.omega, cfg.heatmap_sites).plot(["heatmap", "axes_labels"], heatmap)
            Plotter(series, params.omega).plot(["populations", "revival", "legend", "axes_labels"], curves)
            outputs.update(heatmap=heatmap, curves=curves)

        norms = np.sqrt(series.p_g + series.p_e)
        results = {
            "truncation": n_sites,
            "tail_tol": cfg.tail_tol,
            "norm_tol": NORM_TOL,
            "propagator": "spectral",
            "max_norm_error": float(np.abs(norms - 1.0).max()),
            "p_rev_min": float(series.p_rev.min()),
            "revival_peak": revival_peak(series, params.omega),
        }
        return self._finish("simulate", outputs, results)

    def spectrum(self) -> RunResult:
        cfg = self.config
        n_sites = cfg.truncation or SPECTRUM_SITES
        params = cfg.params(n_sites)
        energies = chain_spectrum(build_chain_hamiltonian(params, cfg.chain), min(cfg.spectrum_levels, n_sites))
        frame = pd.DataFrame(
            {
                "level": np.arange(energies.size),
                "energy": energies,
                "spacing": np.concatenate([[np.nan], level_spacings(energies)]),
            }
        )
        results: Dict[str, Any] = {"truncation": n_sites}
        if params.omega0 == 0:
            ladder = wannier_stark_energies(energies.size, params.g, params.omega)
            frame["ladder"] = ladder
            frame["abs_diff"] = np.abs(energies - ladder)
            results["max_abs_diff"] = float(frame["abs_diff"].max())
        outputs: Dict[str, Path] = {}
        if self.wants("csv"):
            outputs["spectrum"] = write_csv(frame, self.out_dir / "spectrum.csv")
        return self._finish("spectrum", outputs, results)

    def rwa(self) -> RunResult:
        cfg = self.config
        if cfg.chain is not ChainId.C:
            msg = "the rotating-wave pairs (n, n + 1) with even n live on chain C"
            raise ConfigurationError(msg, field="chain")
        if cfg.samples < FIT_MIN_SAMPLES:
            msg = f"the Rabi fit needs at least {FIT_MIN_SAMPLES} samples, got {cfg.samples}"
            raise ConfigurationError(msg, field="samples")
        n = cfg.rwa_site
        base = cfg.params()
        if base.g == 0:
            msg = "no Rabi oscillation without coupling"
            raise ConfigurationError(msg, field="g_over_omega")
        delta = rwa_detuning(base, ChainId.C)
        omega_n = rabi_frequency(n, delta, base.g)
        horizon = cfg.rwa_periods * math.pi / omega_n
        n_sites = resolve_truncation(cfg, horizon, n, ChainId.C)
        if n_sites < n + 2:
            msg = f"truncation {n_sites} does not contain the pair ({n}, {n + 1})"
            raise ConfigurationError(msg, field="truncation")
        params = cfg.params(n_sites)
        grid = TimeGrid(0.0, horizon, cfg.samples)
        series = simulate_chain(params, ChainId.C, n, grid)

        upper = series.photon_dist[:, n + 1]
        fit = fit_rabi_oscillation(grid.times, upper)
        rwa_lower, rwa_upper = rwa_rabi(n, delta, params.g, grid.times)
        peak = params.g**2 * (n + 1) / omega_n**2
        results = {
            "truncation": n_sites,
            "site": n,
            "detuning": delta,
            "rabi_frequency": omega_n,
            "fitted_frequency": fit.frequency,
            "frequency_rel_error": abs(fit.frequency - omega_n) / omega_n,
            "transfer_peak": peak,
            "fitted_amplitude": fit.amplitude,
            "amplitude_rel_error": abs(fit.amplitude - peak) / peak,
            "fit_valid": fit.valid,
        }
        self.info(
            f"Pair ({n}, {n + 1}): Omega {omega_n:.6g}, fitted {fit.frequency:.6g}; "
            f"peak {peak:.4f}, fitted {fit.amplitude:.4f}"
        )
        outputs: Dict[str, Path] = {}
        if self.wants("csv"):
            frame = pd.DataFrame(
                {
                    "omega_t": params.omega * grid.times,
                    "p_lower": series.photon_dist[:, n],
                    "p_upper": upper,
                    "rwa_lower": rwa_lower,
                    "rwa_upper": rwa_upper,
                }
            )
            outputs["rwa"] = write_csv(frame, self.out_dir / "rwa.csv")
        return self._finish("rwa", outputs, results)

    def design(self) -> RunResult:
        cfg = self.config
        fab = cfg.fab
        unit = fab.unit
        base = create_params(
            g_over_omega=cfg.g_over_omega,
            omega0_over_omega=cfg.omega0_over_omega,
            n_sites=cfg.design_n_guides,
        )
        params = physical_params(base, fab, cfg.design_radius, cfg.design_pitch, unit)
        geometry = design_array(
            params, fab, cfg.design_radius, cfg.design_pitch, unit, strict=cfg.design_strict, chain=cfg.chain
        )
        record = design_record(geometry, params, fab)

        spacings_um = convert_length(geometry.spacings[:3], unit, "um")
        self.info(
            f"T = {float(convert_length(geometry.revival_length, unit, 'cm')):.4f} cm, "
            f"g = {float(convert_inverse_length(params.g, unit, 'mm')):.4f} /mm, "
            f"d = {', '.join(f'{d:.3f}' for d in spacings_um)} um"
        )
        outputs: Dict[str, Path] = {}
        if self.wants("csv"):
            outputs["geometry"] = write_csv(geometry_frame(geometry), self.out_dir / "geometry.csv")
        if self.wants("json"):
            outputs["design"] = write_json(record, self.out_dir / "design.json")
        results = {"unit": unit, **record["derived"], "spacings": geometry.spacings[:3].tolist()}
        return self._finish("design", outputs, results)

    def sweep(self) -> RunResult:
        cfg = self.config
        points = list(
            itertools.product(
                cfg.sweep_g_over_omega or (cfg.g_over_omega,),
                cfg.sweep_omega0_over_omega or (cfg.omega0_over_omega,),
            )
        )

        def run_point(point: Any) -> RunResult:
            g_ratio, w0_ratio = point
            sub = cfg.updated(
                mode="simulate",
                g_over_omega=g_ratio,
                omega0_over_omega=w0_ratio,
                sweep_g_over_omega=(),
                sweep_omega0_over_omega=(),
            )
            return ScenarioRunner(sub, self.out_dir / f"g{g_ratio:g}_w{w0_ratio:g}").simulate()

        with ThreadPoolExecutor(max_workers=len(points)) as pool:
            runs: List[RunResult] = list(pool.map(run_point, points))

        peaks = [r.results["revival_peak"] for r in runs]
        frame = pd.DataFrame(
            {
                "g_over_omega": [p[0] for p in points],
                "omega0_over_omega": [p[1] for p in points],
                "truncation": [r.results["truncation"] for r in runs],
                "p_rev_min": [r.results["p_rev_min"] for r in runs],
                "revival_peak": [np.nan if p is None else p for p in peaks],
            }
        )
        outputs: Dict[str, Path] = {}
        if self.wants("csv"):
            outputs["sweep"] = write_csv(frame, self.out_dir / "sweep.csv")
        results = {"points": len(points)}
        return self._finish("sweep", outputs, results)

    def report(self) -> RunResult:
        frame = oracle_report(self.config)
        summary = frame.groupby("observable", sort=False)["abs_diff"].max()
        max_abs_diff = {str(name): float(value) for name, value in summary.items()}
        for name, value in max_abs_diff.items():
            self.info(f"max |numeric - oracle| for {name}: {value:.3e}")
        results: Dict[str, Any] = {"truncation": int(frame.attrs["truncation"]), "max_abs_diff": max_abs_diff}
        outputs: Dict[str, Path] = {}
        if self.wants("csv"):
            outputs["report"] = write_csv(frame, self.out_dir / "report.csv")
        return self._finish("report", outputs, results)


def run_scenario(config: ScenarioConfig, out_dir: Optional[Union[str, Path]] = None) -> RunResult:
    """Run ``config.mode`` and write its outputs"""
    return ScenarioRunner(config, out_dir).run()
