"""Independent-replication estimates with Student-t confidence intervals."""

import logging
import math
from typing import Sequence

import numpy as np
import scipy.stats as stats

from sweetspot.simulator.records import ReplicationOutcome, SimResult

logger = logging.getLogger(__name__)

CONFIDENCE_LEVEL = 0.95


def confidence_halfwidth(values: Sequence[float], level: float = CONFIDENCE_LEVEL) -> float:
    """Half-width of the t-interval for the mean of ``values``.

    A single value gives an infinite half-width.
    """
    data = np.asarray(values, dtype=float)
    if len(data) < 2:
        return math.inf
    sem = float(stats.sem(data))
    if sem == 0.0:
        return 0.0
    return float(stats.t.ppf(0.5 + level / 2.0, len(data) - 1)) * sem


def aggregate(outcomes: Sequence[ReplicationOutcome]) -> SimResult:
    """Combine per-replication outcomes; the order of ``outcomes`` is kept."""
    if len(outcomes) == 1:
        logger.warning("Single replication: confidence intervals are unbounded")

    def column(name: str) -> np.ndarray:
        return np.array([getattr(o, name) for o in outcomes], dtype=float)

    responses = column("response_mean")
    powers = column("power_mean")
    in_system = column("mean_in_system")
    return SimResult(
        response_mean=float(responses.mean()),
        response_ci_halfwidth=confidence_halfwidth(responses),
        power_mean=float(powers.mean()),
        power_ci_halfwidth=confidence_halfwidth(powers),
        off_fraction=float(column("off_fraction").mean()),
        jobs_completed=sum(o.jobs_completed for o in outcomes),
        mean_in_system=float(in_system.mean()),
        mean_in_system_ci_halfwidth=confidence_halfwidth(in_system),
        utilization_gross=float(column("utilization_gross").mean()),
        utilization_net=float(column("utilization_net").mean()),
        replications=tuple(outcomes),
    )
