"""Scenario configuration

A scenario is described by flat ``key = value`` pairs. They come, in order
of increasing precedence, from a preset, a configuration file and
``key=value`` overrides::

    # fig3.cfg
    g_over_omega = 2
    omega0_over_omega = 0.3
    horizon_periods = 2
    truncation = auto

"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Mapping, Optional, Tuple, Union

from .design import FabricationConstants
from .exceptions import ConfigurationError
from .parameters import ChainId, JCParams, create_params

__all__ = [
    "FORMATS",
    "KEYS",
    "MODES",
    "PRESETS",
    "ScenarioConfig",
    "load_config",
    "parse_config_text",
    "parse_override",
]

logger = logging.getLogger(__name__)

MODES = ("simulate", "spectrum", "rwa", "design", "sweep")
FORMATS = ("csv", "json", "svg")


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    msg = f"expected a boolean, got {text!r}"
    raise ValueError(msg)


def _parse_floats(text: str) -> Tuple[float, ...]:
    return tuple(float(item) for item in text.split(",") if item.strip())


def _parse_formats(text: str) -> Tuple[str, ...]:
    formats = tuple(item.strip().lower() for item in text.split(",") if item.strip())
    unknown = [fmt for fmt in formats if fmt not in FORMATS]
    if unknown:
        msg = f"unknown format(s) {unknown}; use a subset of {list(FORMATS)}"
        raise ValueError(msg)
    return formats


def _parse_optional_int(text: str) -> Optional[int]:
    stripped = text.strip().lower()
    if stripped in ("auto", "none", ""):
        return None
    return int(stripped)


def _parse_str(text: str) -> str:
    return text.strip()


# config key -> (ScenarioConfig attribute, parser); "fab.*" keys feed FabricationConstants
KEYS: Dict[str, Tuple[str, Callable[[str], Any]]] = {
    "mode": ("mode", _parse_str),
    "g_over_omega": ("g_over_omega", float),
    "omega0_over_omega": ("omega0_over_omega", float),
    "omega": ("omega", float),
    "chain": ("chain", ChainId.parse),
    "initial_site": ("initial_site", int),
    "horizon_periods": ("horizon_periods", float),
    "samples": ("samples", int),
    "truncation": ("truncation", _parse_optional_int),
    "tail_tol": ("tail_tol", float),
    "heatmap_sites": ("heatmap_sites", _parse_optional_int),
    "spectrum.levels": ("spectrum_levels", int),
    "fab.A": ("A", float),
    "fab.gamma": ("gamma", float),
    "fab.n_s": ("n_s", float),
    "fab.wavelength": ("wavelength", float),
    "fab.unit": ("unit", _parse_str),
    "design.R": ("design_radius", float),
    "design.a": ("design_pitch", float),
    "design.n_guides": ("design_n_guides", int),
    "design.strict": ("design_strict", _parse_bool),
    "rwa.site": ("rwa_site", int),
    "rwa.periods": ("rwa_periods", float),
    "sweep.g_over_omega": ("sweep_g_over_omega", _parse_floats),
    "sweep.omega0_over_omega": ("sweep_omega0_over_omega", _parse_floats),
    "output.dir": ("output_dir", _parse_str),
    "output.formats": ("output_formats", _parse_formats),
}

PRESETS: Dict[str, Dict[str, str]] = {
    "fig2": {
        "mode": "simulate",
        "g_over_omega": "2",
        "omega0_over_omega": "0",
        "chain": "F",
        "initial_site": "0",
        "horizon_periods": "1.5",
        "samples": "301",
        "truncation": "auto",
    },
    "fig3": {
        "mode": "simulate",
        "g_over_omega": "2",
        "omega0_over_omega": "0.3",
        "chain": "F",
        "initial_site": "0",
        "horizon_periods": "2",
        "samples": "401",
        "truncation": "auto",
    },
    "design-example": {
        "mode": "design",
        "g_over_omega": "2",
        "omega0_over_omega": "0",
        "chain": "F",
        "fab.A": "0.0246",
        "fab.gamma": "0.466",
        "fab.n_s": "1.45",
        "fab.wavelength": "0.633",
        "fab.unit": "um",
        "design.R": "600000",
        "design.a": "6",
        "design.n_guides": "25",
    },
}


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Fully resolved scenario.

    Lengths (``design_radius``, ``design_pitch``) are in ``fab.unit``.
    ``truncation=None`` selects the chain length automatically.
    """

    mode: str = "simulate"
    g_over_omega: float = 2.0
    omega0_over_omega: float = 0.0
    omega: float = 1.0
    chain: ChainId = ChainId.F
    initial_site: int = 0
    horizon_periods: float = 1.5
    samples: int = 301
    truncation: Optional[int] = None
    tail_tol: float = 1e-10
    heatmap_sites: Optional[int] = None
    spectrum_levels: int = 10
    fab: FabricationConstants = field(default_factory=FabricationConstants)
    design_radius: float = 600000.0
    design_pitch: float = 6.0
    design_n_guides: int = 25
    design_strict: bool = False
    rwa_site: int = 0
    rwa_periods: float = 2.0
    sweep_g_over_omega: Tuple[float, ...] = ()
    sweep_omega0_over_omega: Tuple[float, ...] = ()
    output_dir: str = "out"
    output_formats: Tuple[str, ...] = FORMATS

    def __post_init__(self) -> None:
        object.__setattr__(self, "chain", ChainId.parse(self.chain))
        checks = [
            ("mode", self.mode in MODES, f"mode must be one of {list(MODES)}, got {self.mode!r}"),
            ("g_over_omega", self.g_over_omega >= 0, "g_over_omega must be >= 0"),
            ("omega0_over_omega", self.omega0_over_omega >= 0, "omega0_over_omega must be >= 0"),
            ("omega", self.omega > 0, "omega must be > 0"),
            ("initial_site", self.initial_site >= 0, "initial_site must be >= 0"),
            ("horizon_periods", self.horizon_periods > 0, "horizon_periods must be > 0"),
            ("samples", self.samples >= 2, "samples must be >= 2"),
            ("truncation", self.truncation is None or self.truncation >= 2, "truncation must be >= 2"),
            ("tail_tol", 0 < self.tail_tol < 1, "tail_tol must lie in (0, 1)"),
            ("heatmap_sites", self.heatmap_sites is None or self.heatmap_sites >= 1, "heatmap_sites must be >= 1"),
            ("spectrum.levels", self.spectrum_levels >= 1, "spectrum.levels must be >= 1"),
            ("design.R", self.design_radius > 0, "design.R must be > 0"),
            ("design.a", self.design_pitch > 0, "design.a must be > 0"),
            ("design.n_guides", self.design_n_guides >= 2, "design.n_guides must be >= 2"),
            ("rwa.site", self.rwa_site >= 0 and self.rwa_site % 2 == 0, "rwa.site must be an even site"),
            ("rwa.periods", self.rwa_periods > 0, "rwa.periods must be > 0"),
        ]
        for key, ok, msg in checks:
            if not ok:
                raise ConfigurationError(msg, field=key)
        if self.truncation is not None and self.initial_site >= self.truncation:
            msg = f"initial_site {self.initial_site} outside a chain of {self.truncation} sites"
            raise ConfigurationError(msg, field="initial_site")
        if any(value < 0 for value in self.sweep_g_over_omega + self.sweep_omega0_over_omega):
            msg = "sweep values must be >= 0"
            raise ConfigurationError(msg, field="sweep")

    @property
    def horizon(self) -> float:
        """Propagation time ``horizon_periods * 2 pi / omega``"""
        return self.horizon_periods * self.params().period

    def params(self, n_sites: Optional[int] = None) -> JCParams:
        """Model parameters at ``n_sites`` (the explicit truncation by default)"""
        return create_params(
            g_over_omega=self.g_over_omega,
            omega0_over_omega=self.omega0_over_omega,
            omega=self.omega,
            n_sites=n_sites or self.truncation or 2,
        )

    def updated(self, **changes: Any) -> ScenarioConfig:
        return replace(self, **changes)

    def to_mapping(self) -> Dict[str, Any]:
        """Resolved configuration keyed by configuration keys, JSON-ready"""
        fab = asdict(self.fab)
        out: Dict[str, Any] = {}
        for key, (attr, _) in KEYS.items():
            value = fab[attr] if key.startswith("fab.") else getattr(self, attr)
            if isinstance(value, ChainId):
                value = value.value
            elif isinstance(value, tuple):
                value = list(value)
            out[key] = value
        return out


_ATTRIBUTES = {f.name for f in fields(ScenarioConfig)}


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, Tuple[str, str]]:
    """Parse ``key = value`` lines

    Returns:
        ``{key: (value, origin)}`` with ``origin`` as ``source:line``

    Raises:
        ConfigurationError: on malformed lines or unknown keys
    """
    entries: Dict[str, Tuple[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        origin = f"{source}:{lineno}"
        if "=" not in line:
            msg = f"{origin}: expected 'key = value', got {raw.strip()!r}"
            raise ConfigurationError(msg)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            msg = f"{origin}: unknown key {key!r}"
            raise ConfigurationError(msg, field=key)
        entries[key] = (value, origin)
    return entries


def parse_override(text: str) -> Tuple[str, str]:
    """Split a ``key=value`` command-line override"""
    if "=" not in text:
        msg = f"--set expects key=value, got {text!r}"
        raise ConfigurationError(msg)
    key, value = (part.strip() for part in text.split("=", 1))
    if key not in KEYS:
        msg = f"--set: unknown key {key!r}"
        raise ConfigurationError(msg, field=key)
    return key, value


def _build(entries: Mapping[str, Tuple[str, str]]) -> ScenarioConfig:
    kwds: Dict[str, Any] = {}
    fab_kwds: Dict[str, Any] = {}
    for key, (value, origin) in entries.items():
        attr, parse = KEYS[key]
        try:
            parsed = parse(value)
        except ValueError as exc:
            msg = f"{origin}: invalid value {value!r} for {key}: {exc}"
            raise ConfigurationError(msg, field=key) from exc
        (fab_kwds if key.startswith("fab.") else kwds)[attr] = parsed
    assert set(kwds) <= _ATTRIBUTES
    if fab_kwds:
        try:
            kwds["fab"] = FabricationConstants(**fab_kwds)
        except ValueError as exc:
            raise ConfigurationError(str(exc), field="fab") from exc
    return ScenarioConfig(**kwds)


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Iterable[str] = (),
    preset: Optional[str] = None,
) -> ScenarioConfig:
    """Resolve a scenario from a preset, a file and overrides (later wins)

    Args:
        path: Configuration file
        overrides: ``key=value`` strings
        preset: Name of a built-in preset

    Returns:
        ScenarioConfig

    Raises:
        ConfigurationError: with the offending key and, for files, the line
    """
    entries: Dict[str, Tuple[str, str]] = {}
    if preset is not None:
        if preset not in PRESETS:
            msg = f"unknown preset {preset!r}; choose one of {sorted(PRESETS)}"
            raise ConfigurationError(msg, field="preset")
        entries.update({key: (value, f"preset {preset}") for key, value in PRESETS[preset].items()})
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            msg = f"cannot read configuration file {path}: {exc}"
            raise ConfigurationError(msg) from exc
        entries.update(parse_config_text(text, source=str(path)))
    for item in overrides:
        key, value = parse_override(item)
        entries[key] = (value, f"--set {key}")
    config = _build(entries)
    logger.debug("Resolved configuration %s", config.to_mapping())
    return config
