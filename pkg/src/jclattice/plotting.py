from __future__ import annotations

import io
import threading
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import matplotlib as mpl
import numpy as np
from matplotlib.axes import Axes
from matplotlib.figure import Figure

from .observables import ObservableSeries
from .utils import ClassLoggingMixin, atomic_write

DEFAULT_COLORS = [
    "#E24A33",
    "#348ABD",
    "#988ED5",
    "#777777",
]
HEATMAP_CMAP = "viridis"

# fixed ids in SVG output
mpl.rcParams["svg.hashsalt"] = "jclattice"

# matplotlib state is process-global; sweep workers render one at a time
_RENDER_LOCK = threading.Lock()


class Plotter(ClassLoggingMixin):
    """Static figures of a trajectory: the ``P(n, t)`` heatmap and the qubit/revival curves"""

    def __init__(
        self,
        series: ObservableSeries,
        omega: float = 1.0,
        n_sites: Optional[int] = None,
        cfg: Optional[Dict[str, Any]] = None,
    ) -> None:
        """
        Args:
            series: Observables to draw
            omega: Frequency unit of the horizontal axis ``omega t``
            n_sites: Number of sites shown in the heatmap (all by default)
            cfg: Figure options (``figsize``, ``legend``)
        """
        super().__init__()
        self.cfg = cfg or {}
        self.series = series
        self.omega_t = omega * series.times
        self.n_sites = min(n_sites or series.n_sites, series.n_sites)
        self.fig: Optional[Figure] = None
        self.ax: List[Axes] = []
        self._row = 0
        self.parts: Dict[str, Callable[[], None]] = {
            "heatmap": self.plot_heatmap,
            "populations": self.plot_populations,
            "revival": self.plot_revival,
            "legend": self.plot_legend,
            "axes_labels": self.plot_axes_labels,
        }

    def setup_axis(self, components: List[str]) -> List[Axes]:
        n_rows = sum(c in components for c in ("heatmap", "populations", "revival"))
        n_rows = max(n_rows, 1)
        self.fig = Figure(figsize=self.cfg.get("figsize", (6, 2.5 * n_rows)))
        ax = self.fig.subplots(n_rows, 1, sharex=True, squeeze=False)
        return list(ax[:, 0])

    def plot(
        self,
        components: Optional[List[str]] = None,
        filename: Optional[Union[str, Path]] = None,
    ) -> Plotter:
        """Draw ``components`` (the heatmap alone by default) and optionally save as SVG"""
        if not components:
            components = ["heatmap", "axes_labels"]
        with _RENDER_LOCK:
            self.ax = self.setup_axis(components)
            self._row = 0
            for c in components:
                self.parts[c]()
            if not filename:
                return self
            assert self.fig is not None
            buffer = io.BytesIO()
            self.fig.savefig(buffer, format="svg", metadata={"Date": None}, bbox_inches="tight")
        atomic_write(filename, buffer.getvalue())
        self.info(f"Wrote {filename}")
        return self

    def _next_axis(self) -> Axes:
        axis = self.ax[self._row]
        self._row += 1
        return axis

    def plot_heatmap(self) -> None:
        ax = self._next_axis()
        probs = self.series.photon_dist[:, : self.n_sites].T
        vmin, vmax = float(probs.min()), float(probs.max())
        mesh = ax.pcolormesh(
            self.omega_t,
            np.arange(self.n_sites),
            probs,
            shading="nearest",
            cmap=HEATMAP_CMAP,
            vmin=vmin,
            vmax=vmax,
        )
        assert self.fig is not None
        self.fig.colorbar(mesh, ax=ax, label="P(n, t)")
        ax.set_ylabel("n")
        ax.annotate(
            f"min {vmin:.3g}, max {vmax:.3g}",
            xy=(1.0, 1.02),
            xycoords="axes fraction",
            ha="right",
            fontsize="small",
        )

    def plot_populations(self) -> None:
        ax = self._next_axis()
        ax.plot(self.omega_t, self.series.p_g, color=DEFAULT_COLORS[0], label="$P_g$")
        ax.plot(self.omega_t, self.series.p_e, color=DEFAULT_COLORS[1], label="$P_e$")
        ax.set_ylim(-0.02, 1.02)
        ax.set_ylabel("population")

    def plot_revival(self) -> None:
        ax = self._next_axis()
        ax.plot(self.omega_t, self.series.p_rev, color="black", label="$P_{rev}$")
        ax.set_ylim(-0.02, 1.02)
        ax.set_ylabel("$P_{rev}$")

    def plot_legend(self) -> None:
        for ax in self.ax:
            if ax.get_legend_handles_labels()[0]:
                ax.legend(**self.cfg.get("legend", {}), frameon=False)

    def plot_axes_labels(self) -> None:
        self.ax[-1].set_xlabel(r"$\omega t$")
        self.ax[-1].set_xlim(self.omega_t[0], self.omega_t[-1])
