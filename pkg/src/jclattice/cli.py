"""Command-line interface

    jclattice simulate --preset fig2 --out out/fig2
    jclattice design --preset design-example --format csv,json
    jclattice report --set g_over_omega=1 --set horizon_periods=2

Exit status: 0 success, 2 invalid configuration, 3 numerical failure,
4 infeasible design, 1 any other package error.
"""

from __future__ import annotations

import argparse
import logging
from typing import List, Optional, Sequence

from .config import FORMATS, PRESETS, load_config
from .exceptions import (
    ConfigurationError,
    ConvergenceError,
    EigensolverError,
    InfeasibleDesignError,
    JCLatticeError,
    UnitError,
)
from .runner import ScenarioRunner
from .utils import ClassLoggingMixin

__all__ = ["EXIT_CODES", "build_parser", "exit_code", "main"]

logger = logging.getLogger("jclattice")

COMMANDS = ("simulate", "spectrum", "rwa", "design", "sweep", "report")

EXIT_CODES = (
    (ConfigurationError, 2),
    (UnitError, 2),
    (ConvergenceError, 3),
    (EigensolverError, 3),
    (InfeasibleDesignError, 4),
    (JCLatticeError, 1),
)


def exit_code(exc: JCLatticeError) -> int:
    for kind, code in EXIT_CODES:
        if isinstance(exc, kind):
            return code
    return 1


def _formats(text: str) -> List[str]:
    formats = [item.strip().lower() for item in text.split(",") if item.strip()]
    for fmt in formats:
        if fmt not in FORMATS:
            msg = f"invalid format {fmt!r} (choose from {', '.join(FORMATS)})"
            raise argparse.ArgumentTypeError(msg)
    return formats


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a configuration key (repeatable, applied after --config)",
    )
    common.add_argument("--preset", choices=sorted(PRESETS), help="start from a built-in scenario")
    common.add_argument("--out", help="output directory")
    common.add_argument(
        "--format",
        dest="formats",
        action="append",
        type=_formats,
        help=f"output formats, comma separated subset of {','.join(FORMATS)}",
    )
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="jclattice",
        description="Jaynes-Cummings dynamics as light transport in waveguide superlattices",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "simulate": "propagate a single-site excitation and write observables",
        "spectrum": "low-lying eigenvalues of a parity chain",
        "rwa": "full lattice against the rotating-wave Rabi pairs",
        "design": "waveguide spacings realising the chain couplings",
        "sweep": "simulate a grid of coupling and splitting ratios",
        "report": "compare a simulation with the closed-form dynamics",
    }
    for command in COMMANDS:
        sub.add_parser(command, parents=[common], help=helps[command])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    ClassLoggingMixin.setup_basic_config(logging.DEBUG if args.verbose else logging.INFO)

    overrides = list(args.overrides)
    if args.command != "report":
        overrides.append(f"mode={args.command}")
    if args.out:
        overrides.append(f"output.dir={args.out}")
    if args.formats:
        overrides.append("output.formats=" + ",".join(f for group in args.formats for f in group))

    try:
        config = load_config(args.config, overrides, args.preset)
        runner = ScenarioRunner(config)
        result = runner.report() if args.command == "report" else runner.run()
    except JCLatticeError as exc:
        code = exit_code(exc)
        where = getattr(exc, "field", None)
        logger.error("%s%s", f"[{where}] " if where else "", exc)
        return code

    for name, path in result.outputs.items():
        logger.debug("%s: %s", name, path)
    return 0
