"""Simulate command: discrete-event estimates with confidence intervals."""

import logging
from typing import Tuple

from sweetspot.commands.base import PARAMETER_COLUMNS, STATUS_OK, BaseCommand, Row, parameter_values
from sweetspot.config import Config
from sweetspot.scenario import Scenario
from sweetspot.simulator import simulate

logger = logging.getLogger(__name__)

COMMAND_SIMULATE = "simulate"

SIMULATE_COLUMNS = PARAMETER_COLUMNS + (
    "sim.seed",
    "sim.replications",
    "sim.horizon",
    "status",
    "response",
    "response_ci",
    "power",
    "power_ci",
    "off_fraction",
    "mean_in_system",
    "mean_in_system_ci",
    "utilization_gross",
    "utilization_net",
    "jobs_completed",
)


class SimulateCommand(BaseCommand):
    """Runs independent replications of the configured server or farm."""

    @property
    def name(self) -> str:
        return COMMAND_SIMULATE

    @property
    def columns(self) -> Tuple[str, ...]:
        return SIMULATE_COLUMNS

    def evaluate(self, scenario: Scenario, config: Config) -> Row:
        cfg = scenario.sim_config(config)
        result = simulate(cfg)
        return {
            **parameter_values(scenario),
            "sim.seed": cfg.seed,
            "sim.replications": cfg.replications,
            "sim.horizon": cfg.horizon,
            "status": STATUS_OK,
            "response": result.response_mean,
            "response_ci": result.response_ci_halfwidth,
            "power": result.power_mean,
            "power_ci": result.power_ci_halfwidth,
            "off_fraction": result.off_fraction,
            "mean_in_system": result.mean_in_system,
            "mean_in_system_ci": result.mean_in_system_ci_halfwidth,
            "utilization_gross": result.utilization_gross,
            "utilization_net": result.utilization_net,
            "jobs_completed": result.jobs_completed,
        }
