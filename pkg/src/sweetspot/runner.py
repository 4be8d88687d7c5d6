"""One CLI invocation: load, route, execute, emit, report."""

import logging
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, TextIO, Tuple

from sweetspot.config import Config, ConfigError
from sweetspot.emit import OutputFormat, emit
from sweetspot.errors import (
    BudgetTooLooseError,
    DomainError,
    EmitError,
    InfeasibleBudgetError,
    InfeasibleError,
    NoClosedFormError,
    ScenarioParseError,
    SweetspotError,
    UnstableSystemError,
)
from sweetspot.router import CommandRouter, UnknownCommandError, discover_commands
from sweetspot.scenario import load_scenario
from sweetspot.utils.overrides import parse_overrides

logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_UNEXPECTED = 1

# (error type, exit code, diagnostic name); first match wins
EXIT_CODES: Tuple[Tuple[type, int, str], ...] = (
    (ScenarioParseError, 2, "ParseError"),
    (ConfigError, 3, "ConfigError"),
    (DomainError, 3, "ConfigError"),
    (UnstableSystemError, 4, "UnstableSystem"),
    (InfeasibleError, 5, "Infeasible"),
    (InfeasibleBudgetError, 5, "Infeasible"),
    (BudgetTooLooseError, 5, "Infeasible"),
    (NoClosedFormError, 6, "NoClosedForm"),
    (EmitError, 7, "IoError"),
    (UnknownCommandError, 8, "UnknownCommand"),
)


def write_diagnostic(stream: TextIO, name: str, message: str) -> None:
    """One greppable line: ``sweetspot: error=<name> message=<text>``."""
    flat = " ".join(message.split())
    stream.write(f"sweetspot: error={name} message={flat}\n")


def exit_code_for(error: SweetspotError) -> Tuple[int, str]:
    for error_type, code, name in EXIT_CODES:
        if isinstance(error, error_type):
            return code, name
    return EXIT_UNEXPECTED, type(error).__name__


@dataclass(frozen=True)
class RunRequest:
    """Everything the command line asked for."""

    command: str
    scenario_path: str
    overrides: List[str] = field(default_factory=list)
    out_dir: Optional[str] = None
    fmt: OutputFormat = OutputFormat.CSV
    seed: Optional[int] = None
    replications: Optional[int] = None
    trace: Optional[str] = None
    workers: Optional[int] = None
    quiet: bool = False

    def settings(self) -> Dict[str, str]:
        """``--set`` overrides, then dedicated flags, which win."""
        merged = parse_overrides(self.overrides)
        flags = {
            "sim.seed": self.seed,
            "sim.replications": self.replications,
            "sim.trace": self.trace,
            "sim.workers": self.workers,
        }
        merged.update({key: str(value) for key, value in flags.items() if value is not None})
        return merged


class Runner:
    """Executes run requests and maps failures to exit codes."""

    def __init__(
        self,
        config: Config,
        router: Optional[CommandRouter] = None,
        stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None,
    ):
        self._config = config
        self._router = router or discover_commands()
        self._stdout = stdout or sys.stdout
        self._stderr = stderr or sys.stderr

    def run(self, request: RunRequest) -> int:
        """Run one request.

        Returns:
            0 on success, otherwise the exit code of the failure.
        """
        try:
            return self._run(request)
        except SweetspotError as e:
            code, name = exit_code_for(e)
            logger.error(f"{request.command} failed: {name}: {e}")
            self._diagnostic(name, str(e))
            return code
        except Exception as e:
            logger.exception(f"Unexpected error running {request.command}")
            self._diagnostic(type(e).__name__, str(e))
            return EXIT_UNEXPECTED

    def _run(self, request: RunRequest) -> int:
        command = self._router.get_command(request.command)
        scenario = load_scenario(request.scenario_path, request.settings())
        logger.info(f"Running {command.name} on scenario '{scenario.name}'")

        output = command.execute(scenario, self._config)
        out_dir = request.out_dir or self._config.output_dir
        emit(output, out_dir, scenario.name, request.fmt)

        if not request.quiet:
            self._stdout.write("\n".join(output.summary) + "\n")
        logger.info(f"Finished {command.name} on scenario '{scenario.name}'")
        return EXIT_OK

    def _diagnostic(self, name: str, message: str) -> None:
        write_diagnostic(self._stderr, name, message)
