"""Sweep command: evaluate a scenario over the Cartesian product of its axes."""

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import Any, Dict, List, Tuple

from sweetspot.commands.analyze import COMMAND_ANALYZE, AnalyzeCommand
from sweetspot.commands.base import (
    DATA_TABLE,
    STATUS_OK,
    BaseCommand,
    CommandOutput,
    Row,
    Table,
    status_for,
)
from sweetspot.commands.optimize import COMMAND_OPTIMIZE, OptimizeCommand
from sweetspot.commands.simulate import COMMAND_SIMULATE, SimulateCommand
from sweetspot.commands.validate import COMMAND_VALIDATE, ValidateCommand
from sweetspot.config import Config
from sweetspot.errors import SweetspotError
from sweetspot.scenario import Scenario
from sweetspot.utils.formatting import format_value

logger = logging.getLogger(__name__)

COMMAND_SWEEP = "sweep"
EVALUATE_KEY = "sweep.evaluate"

POINT_COMMANDS: Dict[str, type] = {
    COMMAND_ANALYZE: AnalyzeCommand,
    COMMAND_SIMULATE: SimulateCommand,
    COMMAND_OPTIMIZE: OptimizeCommand,
    COMMAND_VALIDATE: ValidateCommand,
}


def evaluate_point(command: BaseCommand, scenario: Scenario, config: Config, point: Dict[str, Any]) -> Row:
    """Evaluate one grid point; unstable or infeasible points become status rows."""
    at = scenario.with_settings(point)
    try:
        row = command.evaluate(at, config)
    except SweetspotError as e:
        status = status_for(e)
        if status is None:
            raise
        logger.warning(f"Sweep point {point} is {status}: {e}")
        row = command.failed_row(at, status)
    return {**point, **row}


class SweepCommand(BaseCommand):
    """Runs analyze, simulate, optimize or validate at every grid point.

    Row order is the grid order (last axis fastest) whatever the number
    of workers. Unstable, infeasible and closed-form-less points keep
    their row with a status label and empty metrics.
    """

    @property
    def name(self) -> str:
        return COMMAND_SWEEP

    @property
    def columns(self) -> Tuple[str, ...]:
        return AnalyzeCommand().columns

    def point_command(self, scenario: Scenario) -> BaseCommand:
        return POINT_COMMANDS[scenario.get(EVALUATE_KEY, COMMAND_ANALYZE)]()

    def header(self, scenario: Scenario) -> Tuple[str, ...]:
        base = self.point_command(scenario).columns
        extra = tuple(axis.key for axis in scenario.axes if axis.key not in base)
        return extra + base

    def evaluate(self, scenario: Scenario, config: Config) -> Row:
        """Single-point evaluation, for a sweep without axes."""
        return evaluate_point(self.point_command(scenario), scenario, config, {})

    def rows(self, scenario: Scenario, config: Config) -> List[Row]:
        command = self.point_command(scenario)
        points = scenario.grid()
        workers = scenario.get("sim.workers", config.workers)
        logger.info(
            f"Sweeping {len(points)} point(s) over {len(scenario.axes)} axis/axes "
            f"with {command.name}, workers={workers}"
        )
        if workers > 1 and len(points) > 1:
            # Points run in parallel; replications inside each stay serial
            serial = scenario.with_settings({"sim.workers": 1})
            with ProcessPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(evaluate_point, repeat(command), repeat(serial), repeat(config), points))
        return [evaluate_point(command, scenario, config, point) for point in points]

    def execute(self, scenario: Scenario, config: Config) -> CommandOutput:
        header = self.header(scenario)
        rows = [{column: row.get(column) for column in header} for row in self.rows(scenario, config)]
        data = Table(name=DATA_TABLE, header=header, rows=rows)
        return CommandOutput(tables=(data,), summary=sweep_summary(scenario, data))


def sweep_summary(scenario: Scenario, data: Table) -> Tuple[str, ...]:
    """Point counts per status and the lowest-power point, formatted as in the CSV."""
    title = f"SWEEP {scenario.name}"
    lines = [title, "=" * len(title), f"points={len(data.rows)}"]
    counts = Counter(row.get("status") for row in data.rows)
    lines.extend(f"status.{status}={count}" for status, count in sorted(counts.items()))

    ok = [row for row in data.rows if row.get("status") == STATUS_OK and row.get("power") is not None]
    if ok:
        best = min(ok, key=lambda row: row["power"])
        lines.append(f"min_power={format_value(best['power'])}")
        lines.extend(f"min_power.{axis.key}={format_value(best.get(axis.key))}" for axis in scenario.axes)
    return tuple(lines)
