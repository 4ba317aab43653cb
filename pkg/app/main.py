"""
Command-line front end.

Runs one parameter sweep and writes it as CSV:

    python -m app.main cutoff --preset fig1 --out fig1.csv
    python -m app.main dispersive --delta-policy factor:10 --g-min 0.01 --g-max 0.1 --g-steps 10

Exit codes: 0 success, 1 invalid configuration, 2 numerical failure,
3 flagged rows present without --allow-flagged.
"""

import argparse
import asyncio
import csv
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from .config import Config, load_config_file
from .errors import ConfigError, IRWAError
from .models import CutoffPolicy, DetuningPolicy, RowResult, SweepConfig
from .presets import get_preset
from .sweeps import SweepRunner, columns_for

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_CONFIG = 1
EXIT_NUMERICAL_FAILURE = 2
EXIT_FLAGGED_ROWS = 3

COMMANDS = ("cutoff", "spectrum", "dispersive", "twoqubit", "evolve", "regime")

# Flag name -> SweepConfig field
_FIELD_NAMES = {
    "g_min": "grid_min",
    "g_max": "grid_max",
    "g_steps": "steps",
}

_BOOLEAN_KEYS = ("allow_flagged",)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports bad flags as ConfigError instead of exiting."""

    def error(self, message: str):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="irwa", description="Qubit-resonator sweeps in the IRWA")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--preset", help="Named figure preset")
    parser.add_argument("--config", help="Flat key=value config file")

    # Everything below defaults to SUPPRESS so that unset flags never shadow
    # config-file or preset values
    group = parser.add_argument_group("sweep")
    group.add_argument("--sweep", choices=("g", "delta", "t"), default=argparse.SUPPRESS)
    group.add_argument("--g-min", type=float, default=argparse.SUPPRESS)
    group.add_argument("--g-max", type=float, default=argparse.SUPPRESS)
    group.add_argument("--g-steps", type=int, default=argparse.SUPPRESS)
    group.add_argument("--g", type=float, default=argparse.SUPPRESS, help="Fixed coupling")
    group.add_argument("--omega-r", type=float, default=argparse.SUPPRESS)
    detuning = group.add_mutually_exclusive_group()
    detuning.add_argument("--omega-a", type=float, default=argparse.SUPPRESS)
    detuning.add_argument("--delta-policy", default=argparse.SUPPRESS, help="fixed:V or factor:C")
    group.add_argument(
        "--cutoff-policy",
        default=argparse.SUPPRESS,
        help="factor_of_g:C, factor_of_detuning:C or fixed:V",
    )
    group.add_argument("--fock", default=argparse.SUPPRESS, help="auto or a fixed n_max")
    group.add_argument("--levels", type=int, default=argparse.SUPPRESS)
    group.add_argument("--variant", choices=("rwa", "nonrwa", "irwa"), default=argparse.SUPPRESS)
    group.add_argument("--photon-number", type=int, default=argparse.SUPPRESS)

    output = parser.add_argument_group("output")
    output.add_argument("--out", default=argparse.SUPPRESS, help="CSV path (stdout if omitted)")
    output.add_argument("--allow-flagged", action="store_true", default=argparse.SUPPRESS)
    output.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    output.add_argument("--log-level", default=Config.LOG_LEVEL)
    return parser


def _parse_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"Expected a boolean, got {value!r}")


def build_config(args: argparse.Namespace) -> SweepConfig:
    """
    Merge preset, config file and flags into a SweepConfig.

    Precedence: flags > config file > preset > built-in defaults.

    Raises:
        ConfigError: unknown preset, unreadable file or malformed policy
        ValidationError: values outside their allowed ranges
    """
    merged: Dict[str, Any] = {}
    if args.preset:
        merged.update(get_preset(args.preset))
    if args.config:
        file_values = load_config_file(args.config)
        file_values.pop("log_level", None)
        merged.update({k: v for k, v in file_values.items() if v is not None})

    flags = {
        k: v for k, v in vars(args).items() if k not in ("command", "preset", "config", "log_level")
    }
    merged.update(flags)

    preset_command = merged.pop("command", None)
    if preset_command and preset_command != args.command:
        raise ConfigError(f"Preset {args.preset} is for the {preset_command} command")

    # omega_a and delta_policy are alternatives; an explicit flag replaces the other
    if "delta_policy" in flags:
        merged.pop("omega_a", None)
    elif "omega_a" in flags:
        merged.pop("delta_policy", None)

    fields: Dict[str, Any] = {"command": args.command}
    for key, value in merged.items():
        fields[_FIELD_NAMES.get(key, key)] = value

    try:
        if "cutoff_policy" in fields and not isinstance(fields["cutoff_policy"], CutoffPolicy):
            fields["cutoff_policy"] = CutoffPolicy.parse(str(fields["cutoff_policy"]))
        if "delta_policy" in fields and not isinstance(fields["delta_policy"], DetuningPolicy):
            fields["delta_policy"] = DetuningPolicy.parse(str(fields["delta_policy"]))
    except ValueError as e:
        raise ConfigError(str(e)) from e

    for key in _BOOLEAN_KEYS:
        if key in fields:
            fields[key] = _parse_bool(fields[key])
    if "fock" in fields and str(fields["fock"]) != "auto":
        try:
            fields["fock"] = int(fields["fock"])
        except ValueError as e:
            raise ConfigError(f"fock must be 'auto' or an integer, got {fields['fock']!r}") from e

    return SweepConfig(**fields)


def format_value(value: Any) -> str:
    """Fixed CSV formatting: 12 significant digits, empty cell for missing values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        text = f"{value:.{Config.CSV_DIGITS}g}"
        return "0" if text == "-0" else text
    return str(value)


def write_csv(results: Sequence[RowResult], columns: List[str], stream: TextIO) -> None:
    """Write rows in grid order; flagged rows keep the x value and carry a reason."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns + ["flag"])
    for result in results:
        records = result.records or [{columns[0]: result.x}]
        for record in records:
            cells = [format_value(record.get(column)) for column in columns]
            writer.writerow(cells + [result.error or ""])


def _emit(results: Sequence[RowResult], config: SweepConfig) -> None:
    columns = columns_for(config)
    if config.out:
        with open(config.out, "w", newline="", encoding="utf-8") as stream:
            write_csv(results, columns, stream)
        logger.info(f"Wrote {len(results)} rows to {config.out}")
    else:
        write_csv(results, columns, sys.stdout)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the sweep, write CSV and return the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as e:
        logging.basicConfig(format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")
        logger.error(f"Invalid arguments: {e}")
        return EXIT_INVALID_CONFIG

    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        Config.validate()
        config = build_config(args)
    except (ConfigError, ValidationError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_INVALID_CONFIG

    try:
        results = asyncio.run(SweepRunner(config).run())
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_INVALID_CONFIG
    except IRWAError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL_FAILURE

    try:
        _emit(results, config)
    except OSError as e:
        logger.error(f"Cannot write output: {e}")
        return EXIT_INVALID_CONFIG

    flagged = [r for r in results if not r.success]
    if flagged and not config.allow_flagged:
        logger.warning(f"{len(flagged)} flagged rows; rerun with --allow-flagged to accept them")
        return EXIT_FLAGGED_ROWS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
