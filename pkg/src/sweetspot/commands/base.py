"""Base class for scenario command handlers."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from sweetspot.config import Config
from sweetspot.errors import (
    InfeasibleBudgetError,
    InfeasibleError,
    NoClosedFormError,
    UnstableSystemError,
)
from sweetspot.models import NEVER
from sweetspot.scenario import Scenario
from sweetspot.utils.formatting import format_value

logger = logging.getLogger(__name__)


# Primary table name; emitted as data.csv / data.json
DATA_TABLE = "data"

STATUS_OK = "ok"
STATUS_UNSTABLE = "unstable"
STATUS_INFEASIBLE = "infeasible"
STATUS_NO_CLOSED_FORM = "no_closed_form"

# Point-level failures a sweep records as a status instead of aborting
POINT_STATUSES: Tuple[Tuple[type, str], ...] = (
    (UnstableSystemError, STATUS_UNSTABLE),
    (InfeasibleBudgetError, STATUS_INFEASIBLE),
    (InfeasibleError, STATUS_INFEASIBLE),
    (NoClosedFormError, STATUS_NO_CLOSED_FORM),
)

# Columns describing the evaluated system, named by their scenario keys
PARAMETER_COLUMNS: Tuple[str, ...] = (
    "server.p0",
    "server.c",
    "server.mu",
    "server.f",
    "workload.lambda",
    "policy.tau_c",
    "policy.tau_s",
    "policy.tau_w",
    "farm.n",
    "farm.dispatch",
    "farm.k",
)

PARAMETER_DEFAULTS: Dict[str, Any] = {
    "server.f": 1.0,
    "policy.tau_c": NEVER,
    "policy.tau_s": 0.0,
    "policy.tau_w": 0.0,
    "opt.space": "threshold",
}

Row = Dict[str, Any]


@dataclass(frozen=True)
class Table:
    """A named table with a fixed column order."""

    name: str
    header: Tuple[str, ...]
    rows: List[Row] = field(default_factory=list)


@dataclass(frozen=True)
class CommandOutput:
    """Everything a command produced: tables to emit and summary lines."""

    tables: Tuple[Table, ...]
    summary: Tuple[str, ...] = ()

    @property
    def data(self) -> Table:
        return next(t for t in self.tables if t.name == DATA_TABLE)


def parameter_values(scenario: Scenario, columns: Tuple[str, ...] = PARAMETER_COLUMNS) -> Row:
    """Raw parameter values of a scenario; tau_c never is spelled ``never``."""
    row: Row = {}
    for key in columns:
        value = scenario.get(key, PARAMETER_DEFAULTS.get(key))
        if key == "policy.tau_c" and value is None:
            value = NEVER
        row[key] = value
    return row


def status_for(error: Exception) -> Optional[str]:
    """Status label for a point-level failure, or None if it should propagate."""
    for error_type, status in POINT_STATUSES:
        if isinstance(error, error_type):
            return status
    return None


class BaseCommand(ABC):
    """Abstract base class for all scenario commands.

    Each command handles one CLI subcommand (e.g. analyze, simulate).
    A command evaluates one scenario point into one row; ``execute``
    wraps that row into tables and summary lines.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """The subcommand this command handles (e.g. 'analyze')."""
        pass

    @property
    @abstractmethod
    def columns(self) -> Tuple[str, ...]:
        """Header of the data table, in output order."""
        pass

    @abstractmethod
    def evaluate(self, scenario: Scenario, config: Config) -> Row:
        """Evaluate a single scenario point.

        Args:
            scenario: Scenario with no unresolved axes.
            config: Process-wide defaults.

        Returns:
            One row keyed by ``columns``.
        """
        pass

    def failed_row(self, scenario: Scenario, status: str) -> Row:
        """Row for a point that could not be evaluated; metrics left empty."""
        row = {column: None for column in self.columns}
        row.update({k: v for k, v in parameter_values(scenario, self.columns).items() if k in row})
        row["status"] = status
        return row

    def execute(self, scenario: Scenario, config: Config) -> CommandOutput:
        """Run the command on a scenario and collect its output.

        Args:
            scenario: The loaded scenario.
            config: Process-wide defaults.

        Returns:
            CommandOutput with the data table first.
        """
        if scenario.axes:
            logger.warning(
                f"{self.name} ignores {len(scenario.axes)} sweep axis/axes; use the sweep command"
            )
        row = self.evaluate(scenario, config)
        data = Table(name=DATA_TABLE, header=self.columns, rows=[row])
        return CommandOutput(tables=(data,), summary=summary_lines(self.name, scenario, data))


def summary_lines(title: str, scenario: Scenario, data: Table) -> Tuple[str, ...]:
    """Human-readable summary of a single-row data table.

    Values are formatted exactly as in the CSV output.
    """
    header = f"{title.upper()} {scenario.name}"
    lines = [header, "=" * len(header)]
    for row in data.rows:
        lines.extend(f"{column}={format_value(row.get(column))}" for column in data.header)
    return tuple(lines)
