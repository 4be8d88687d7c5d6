"""Analytic-versus-simulated comparison harness."""

import logging
from dataclasses import replace

from sweetspot.analytic import threshold_metrics
from sweetspot.errors import NoClosedFormError
from sweetspot.models import Metrics
from sweetspot.simulator.records import SimConfig, ValidationReport
from sweetspot.simulator.simulation import simulate

logger = logging.getLogger(__name__)


def analytic_counterpart(cfg: SimConfig) -> Metrics:
    """Closed-form prediction for a simulation config.

    A Bernoulli farm is n independent threshold servers at rate lambda/n;
    with tau_c never this is the flow-splitting model.

    Raises:
        NoClosedFormError: For fork-join farms.
        UnstableSystemError: If the per-server queue is unstable.
    """
    if cfg.is_fork_join:
        raise NoClosedFormError("fork-join response time has no known closed form")
    n = cfg.n_servers
    per_server = threshold_metrics(cfg.server, cfg.workload.split(n), cfg.policy)
    return replace(per_server, power=n * per_server.power)


def _relative(error: float, reference: float) -> float:
    return error / abs(reference) if reference else float("inf")


def validate(cfg: SimConfig) -> ValidationReport:
    """Simulate ``cfg`` and check the closed form against the CI.

    Raises:
        NoClosedFormError: For fork-join farms, before any simulation.
    """
    expected = analytic_counterpart(cfg)
    result = simulate(cfg)
    response_error = abs(result.response_mean - expected.response)
    power_error = abs(result.power_mean - expected.power)
    report = ValidationReport(
        simulated=result,
        analytic=expected,
        response_abs_error=response_error,
        response_rel_error=_relative(response_error, expected.response),
        power_abs_error=power_error,
        power_rel_error=_relative(power_error, expected.power),
        response_in_ci=result.response_contains(expected.response),
        power_in_ci=result.power_contains(expected.power),
    )
    level = logging.INFO if report.passed else logging.WARNING
    logger.log(
        level,
        f"Validation response {expected.response} vs {result.response_mean} "
        f"(in CI: {report.response_in_ci}), power {expected.power} vs {result.power_mean} "
        f"(in CI: {report.power_in_ci})",
    )
    return report
