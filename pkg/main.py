#!/usr/bin/env python3
"""sweetspot - analytic models, simulation and sweet-spot search for power-managed servers."""

import argparse
import logging
import os
import sys
from datetime import datetime
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from sweetspot.config import Config, ConfigError
from sweetspot.emit import OutputFormat
from sweetspot.runner import Runner, RunRequest, exit_code_for, write_diagnostic


# Default paths and settings
DEFAULT_ENV_FILE = ".env"
DEFAULT_LOGS_DIR = "logs"
DEFAULT_SCENARIOS_DIR = "scenarios"
SCENARIO_EXTENSION = ".conf"
COMMANDS = ("analyze", "simulate", "optimize", "sweep", "validate")

# Logging formats
LOG_FORMAT_CONSOLE = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
LOG_FORMAT_FILE = "%(asctime)s,%(levelname)s,%(name)s,%(message)s"
LOG_DATEFMT_CONSOLE = "%H:%M:%S"
LOG_DATEFMT_FILE = "%Y-%m-%d %H:%M:%S"
LOG_FILE_PREFIX = "sweetspot-"
LOG_FILE_EXTENSION = ".log"
LOG_TIMESTAMP_FORMAT = "%Y%m%d-%H%M%S"


def setup_logging(verbose: bool = False, logs_dir: str = DEFAULT_LOGS_DIR, quiet: bool = False) -> None:
    """Configure dual logging: console + CSV file.

    Args:
        verbose: If True, console shows DEBUG level.
        logs_dir: Directory for log files.
        quiet: If True, console shows WARNING and above only.
    """
    Path(logs_dir).mkdir(parents=True, exist_ok=True)

    timestamp = datetime.now().strftime(LOG_TIMESTAMP_FORMAT)
    log_file = Path(logs_dir) / f"{LOG_FILE_PREFIX}{timestamp}{LOG_FILE_EXTENSION}"

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)  # Capture all, handlers filter

    if quiet:
        console_level = logging.WARNING
    else:
        console_level = logging.DEBUG if verbose else logging.INFO

    # Console on stderr so stdout carries only the summary
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(console_level)
    console_handler.setFormatter(logging.Formatter(
        LOG_FORMAT_CONSOLE,
        datefmt=LOG_DATEFMT_CONSOLE
    ))
    root_logger.addHandler(console_handler)

    file_handler = logging.FileHandler(log_file)
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter(
        LOG_FORMAT_FILE,
        datefmt=LOG_DATEFMT_FILE
    ))
    root_logger.addHandler(file_handler)

    logging.debug(f"Logging to: {log_file}")


def get_scenarios_dir() -> str:
    """Get path to the bundled scenarios directory."""
    this_dir = Path(__file__).parent
    scenarios_dir = this_dir / DEFAULT_SCENARIOS_DIR
    if scenarios_dir.exists():
        return str(scenarios_dir)

    # Fall back to current directory
    return str(Path.cwd() / DEFAULT_SCENARIOS_DIR)


def resolve_scenario(path: str) -> str:
    """Accept a file path or the name of a bundled scenario (e.g. ``fig3``)."""
    if os.path.exists(path):
        return path
    bundled = Path(get_scenarios_dir()) / f"{path}{SCENARIO_EXTENSION}"
    if bundled.exists():
        return str(bundled)
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="sweetspot - response time and power of DVFS servers with sleep states"
    )
    parser.add_argument("command", choices=COMMANDS, help="What to do with the scenario")
    parser.add_argument(
        "--scenario",
        type=str,
        required=True,
        help="Scenario file, or the name of a bundled scenario (e.g. fig3)",
    )
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a scenario key (repeatable)",
    )
    parser.add_argument("--out", type=str, help="Output directory (default: from env or 'out')")
    parser.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.CSV.value,
        help="csv, or json to also write JSON (default: csv)",
    )
    parser.add_argument("--seed", type=int, help="Root seed for simulation")
    parser.add_argument("--replications", type=int, help="Number of simulation replications")
    parser.add_argument("--trace", type=str, help="Write an event trace of replication 0 to this CSV")
    parser.add_argument("--workers", type=int, help="Processes for replications and sweep points")
    parser.add_argument("--quiet", "-q", action="store_true", help="Warnings only; no summary")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable verbose logging")
    parser.add_argument(
        "--env-file",
        type=str,
        default=DEFAULT_ENV_FILE,
        help=f"Path to .env file (default: {DEFAULT_ENV_FILE})",
    )
    parser.add_argument(
        "--logs-dir",
        type=str,
        default=DEFAULT_LOGS_DIR,
        help=f"Directory for log files (default: {DEFAULT_LOGS_DIR})",
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)

    setup_logging(args.verbose, args.logs_dir, args.quiet)
    logger = logging.getLogger(__name__)

    if os.path.exists(args.env_file):
        load_dotenv(args.env_file)
        logger.info(f"Loaded environment from {args.env_file}")

    try:
        config = Config.from_env()
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        code, name = exit_code_for(e)
        write_diagnostic(sys.stderr, name, str(e))
        return code

    request = RunRequest(
        command=args.command,
        scenario_path=resolve_scenario(args.scenario),
        overrides=args.overrides,
        out_dir=args.out,
        fmt=OutputFormat(args.format),
        seed=args.seed,
        replications=args.replications,
        trace=args.trace,
        workers=args.workers,
        quiet=args.quiet,
    )
    return Runner(config).run(request)


if __name__ == "__main__":
    sys.exit(main())
