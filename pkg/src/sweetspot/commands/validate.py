"""Validate command: closed form against simulation."""

import logging
from typing import Tuple

from sweetspot.commands.base import PARAMETER_COLUMNS, STATUS_OK, BaseCommand, Row, parameter_values
from sweetspot.config import Config
from sweetspot.scenario import Scenario
from sweetspot.simulator import validate

logger = logging.getLogger(__name__)

COMMAND_VALIDATE = "validate"

VALIDATE_COLUMNS = PARAMETER_COLUMNS + (
    "sim.seed",
    "sim.replications",
    "status",
    "response_analytic",
    "response_simulated",
    "response_ci",
    "response_rel_error",
    "response_in_ci",
    "power_analytic",
    "power_simulated",
    "power_ci",
    "power_rel_error",
    "power_in_ci",
    "passed",
)


class ValidateCommand(BaseCommand):
    """Checks that the closed-form metrics fall inside the simulated CIs."""

    @property
    def name(self) -> str:
        return COMMAND_VALIDATE

    @property
    def columns(self) -> Tuple[str, ...]:
        return VALIDATE_COLUMNS

    def evaluate(self, scenario: Scenario, config: Config) -> Row:
        """Simulate and compare.

        Raises:
            NoClosedFormError: For fork-join farms, before simulating.
        """
        cfg = scenario.sim_config(config)
        report = validate(cfg)
        sim = report.simulated
        return {
            **parameter_values(scenario),
            "sim.seed": cfg.seed,
            "sim.replications": cfg.replications,
            "status": STATUS_OK,
            "response_analytic": report.analytic.response,
            "response_simulated": sim.response_mean,
            "response_ci": sim.response_ci_halfwidth,
            "response_rel_error": report.response_rel_error,
            "response_in_ci": report.response_in_ci,
            "power_analytic": report.analytic.power,
            "power_simulated": sim.power_mean,
            "power_ci": sim.power_ci_halfwidth,
            "power_rel_error": report.power_rel_error,
            "power_in_ci": report.power_in_ci,
            "passed": report.passed,
        }
