"""Discrete-event simulation of power-managed servers and farms."""

from sweetspot.simulator.records import ReplicationOutcome, SimConfig, SimResult, ValidationReport
from sweetspot.simulator.simulation import simulate, simulate_forkjoin
from sweetspot.simulator.validation import analytic_counterpart, validate

__all__ = [
    "ReplicationOutcome",
    "SimConfig",
    "SimResult",
    "ValidationReport",
    "analytic_counterpart",
    "simulate",
    "simulate_forkjoin",
    "validate",
]
