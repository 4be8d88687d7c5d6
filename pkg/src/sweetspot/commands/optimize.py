"""Optimize command: sweet-spot search under a response budget."""

import logging
from typing import List, Tuple

from sweetspot.commands.base import (
    DATA_TABLE,
    STATUS_OK,
    BaseCommand,
    CommandOutput,
    Row,
    Table,
    parameter_values,
    summary_lines,
)
from sweetspot.config import Config
from sweetspot.optimizer import FrontierPoint, OptResult, optimize
from sweetspot.scenario import Scenario

logger = logging.getLogger(__name__)

COMMAND_OPTIMIZE = "optimize"
FRONTIER_TABLE = "frontier"

OPTIMIZE_PARAMETERS = (
    "server.p0",
    "server.c",
    "server.mu",
    "workload.lambda",
    "policy.tau_s",
    "opt.space",
    "opt.budget",
)

DECISION_COLUMNS = ("f", "tau_c", "tau_w", "n")

OPTIMIZE_COLUMNS = OPTIMIZE_PARAMETERS + ("status",) + DECISION_COLUMNS + (
    "response",
    "power",
    "feasible",
)

FRONTIER_COLUMNS = DECISION_COLUMNS + ("response", "power")


def _decision_values(point) -> Row:
    decision = point.decision
    return {"f": decision.f, "tau_c": decision.tau_c, "tau_w": decision.tau_w, "n": decision.n}


def frontier_rows(frontier: Tuple[FrontierPoint, ...]) -> List[Row]:
    return [
        {**_decision_values(p), "response": p.response, "power": p.power} for p in frontier
    ]


class OptimizeCommand(BaseCommand):
    """Finds the power-minimizing decision in the scenario's decision space."""

    @property
    def name(self) -> str:
        return COMMAND_OPTIMIZE

    @property
    def columns(self) -> Tuple[str, ...]:
        return OPTIMIZE_COLUMNS

    def _solve(self, scenario: Scenario) -> OptResult:
        problem = scenario.opt_problem()
        logger.info(
            f"Optimizing {problem.space.value} space for budget {problem.budget} "
            f"at lambda={problem.workload.lam}"
        )
        return optimize(problem)

    def _row(self, scenario: Scenario, result: OptResult) -> Row:
        return {
            **parameter_values(scenario, OPTIMIZE_PARAMETERS),
            "status": STATUS_OK,
            **_decision_values(result),
            "response": result.response,
            "power": result.power,
            "feasible": result.feasible,
        }

    def evaluate(self, scenario: Scenario, config: Config) -> Row:
        """Optimal decision for one budget.

        Raises:
            InfeasibleError: If nothing in the decision space meets the budget.
        """
        return self._row(scenario, self._solve(scenario))

    def execute(self, scenario: Scenario, config: Config) -> CommandOutput:
        """Optimal decision plus the frontier of evaluated points."""
        result = self._solve(scenario)
        data = Table(name=DATA_TABLE, header=self.columns, rows=[self._row(scenario, result)])
        frontier = Table(
            name=FRONTIER_TABLE, header=FRONTIER_COLUMNS, rows=frontier_rows(result.frontier)
        )
        logger.info(f"Frontier has {len(frontier.rows)} evaluated point(s)")
        return CommandOutput(tables=(data, frontier), summary=summary_lines(self.name, scenario, data))
