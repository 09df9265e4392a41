"""
Output files

CSV tables are written with 17 significant digits, a fixed column order and
``\\n`` line endings; JSON with sorted keys and the shortest float repr that
round-trips exactly. Identical inputs therefore give
byte-identical files. Every file is written atomically.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Union

import numpy as np
import pandas as pd

from .design import WaveguideGeometry
from .observables import ObservableSeries
from .utils import atomic_write

__all__ = [
    "FLOAT_FORMAT",
    "OBSERVABLE_COLUMNS",
    "file_checksum",
    "geometry_frame",
    "manifest",
    "observables_frame",
    "photon_frame",
    "write_csv",
    "write_json",
]

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
OBSERVABLE_COLUMNS = ["omega_t", "p_g", "p_e", "p_rev"]


def observables_frame(series: ObservableSeries, omega: float) -> pd.DataFrame:
    """Qubit populations and revival probability against ``omega t``"""
    return pd.DataFrame(
        {
            "omega_t": omega * series.times,
            "p_g": series.p_g,
            "p_e": series.p_e,
            "p_rev": series.p_rev,
        },
        columns=OBSERVABLE_COLUMNS,
    )


def photon_frame(series: ObservableSeries, omega: float) -> pd.DataFrame:
    """``P(n, t)``: one row per sample, one column ``n_<site>`` per site"""
    frame = pd.DataFrame(series.photon_dist, columns=[f"n_{n}" for n in range(series.n_sites)])
    frame.insert(0, "omega_t", omega * series.times)
    return frame


def geometry_frame(geometry: WaveguideGeometry) -> pd.DataFrame:
    """One row per guide; the last guide has no outgoing spacing or coupling"""
    pad = np.array([np.nan])
    return pd.DataFrame(
        {
            "n": np.arange(geometry.n_guides),
            "position": geometry.positions,
            "spacing": np.concatenate([geometry.spacings, pad]),
            "coupling": np.concatenate([geometry.couplings, pad]),
            "detuning": geometry.detunings,
        }
    )


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    out = atomic_write(path, text)
    logger.info("Wrote %s", out)
    return out


def _to_builtin(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return obj.as_posix()
    msg = f"Object of type {type(obj).__name__} is not JSON serializable"
    raise TypeError(msg)


def write_json(data: Mapping[str, Any], path: Union[str, Path]) -> Path:
    text = json.dumps(data, indent=2, sort_keys=True, default=_to_builtin) + "\n"
    out = atomic_write(path, text)
    logger.info("Wrote %s", out)
    return out


def file_checksum(path: Union[str, Path]) -> str:
    """SHA-256 hex digest of a file"""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def manifest(
    config: Mapping[str, Any], outputs: Iterable[Path], **results: Any
) -> Dict[str, Any]:
    """Run manifest: resolved configuration, results and output checksums

    Output files are keyed by name, relative to their directory.
    """
    from . import __version__

    return {
        "version": __version__,
        "config": dict(config),
        "results": results,
        "outputs": {Path(p).name: file_checksum(p) for p in outputs},
    }
