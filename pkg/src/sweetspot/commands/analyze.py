"""Analyze command: closed-form response time and power."""

import logging
from typing import Tuple

from sweetspot.analytic import off_fraction
from sweetspot.commands.base import PARAMETER_COLUMNS, STATUS_OK, BaseCommand, Row, parameter_values
from sweetspot.config import Config
from sweetspot.scenario import Scenario
from sweetspot.simulator.validation import analytic_counterpart

logger = logging.getLogger(__name__)

COMMAND_ANALYZE = "analyze"

ANALYZE_COLUMNS = PARAMETER_COLUMNS + ("status", "response", "power", "off_fraction")


class AnalyzeCommand(BaseCommand):
    """Evaluates the analytic model of a single server or Bernoulli farm."""

    @property
    def name(self) -> str:
        return COMMAND_ANALYZE

    @property
    def columns(self) -> Tuple[str, ...]:
        return ANALYZE_COLUMNS

    def evaluate(self, scenario: Scenario, config: Config) -> Row:
        """Closed-form metrics; farm power is the sum over its servers.

        Raises:
            UnstableSystemError: If a server's queue is unstable.
            NoClosedFormError: For fork-join farms.
        """
        cfg = scenario.sim_config(config)
        metrics = analytic_counterpart(cfg)
        off = off_fraction(cfg.server, cfg.workload.split(cfg.n_servers), cfg.policy)
        logger.debug(f"Analytic point {scenario.name}: {metrics} off_fraction={off}")
        return {
            **parameter_values(scenario),
            "status": STATUS_OK,
            "response": metrics.response,
            "power": metrics.power,
            "off_fraction": off,
        }
