"""Simulation inputs and outputs."""

from dataclasses import dataclass, field
from typing import Optional, Tuple

from sweetspot.config import DEFAULT_SEED, MAX_SEED, ConfigError
from sweetspot.models import FarmConfig, Metrics, Policy, ServerParams, Workload

DEFAULT_HORIZON = 200_000
DEFAULT_WARMUP = 1_000
# Accumulation rounding allowed on top of a zero-width interval
ROUNDING_SLACK = 1e-9


@dataclass(frozen=True)
class SimConfig:
    """Everything one simulation run needs; equal configs give equal results.

    Attributes:
        server: Server physics and frequency.
        workload: Poisson arrival stream.
        policy: Shutdown policy applied to every server.
        farm: Farm layout; None for a single server.
        horizon: Job completions per replication, warmup included.
        warmup: Completions discarded at the start of each replication.
        replications: Independent replications.
        seed: Root seed, 64-bit unsigned.
        trace_path: Optional CSV event trace of replication 0.
        workers: Processes used to run replications.
    """

    server: ServerParams
    workload: Workload
    policy: Policy = field(default_factory=Policy.never)
    farm: Optional[FarmConfig] = None
    horizon: int = DEFAULT_HORIZON
    warmup: int = DEFAULT_WARMUP
    replications: int = 20
    seed: int = DEFAULT_SEED
    trace_path: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if not 0 <= self.warmup < self.horizon:
            raise ConfigError(
                f"need horizon > warmup >= 0, got horizon={self.horizon} warmup={self.warmup}"
            )
        if self.replications < 1:
            raise ConfigError(f"sim.replications must be >= 1, got: {self.replications}")
        if not 0 <= self.seed < MAX_SEED:
            raise ConfigError(f"sim.seed must fit in 64 bits, got: {self.seed}")
        if self.workers < 1:
            raise ConfigError(f"sim.workers must be >= 1, got: {self.workers}")
        if self.is_fork_join and not self.policy.never_shuts_down:
            raise ConfigError("fork-join servers stay on; set policy.tau_c=never")

    @property
    def n_servers(self) -> int:
        return 1 if self.farm is None else self.farm.n

    @property
    def is_fork_join(self) -> bool:
        return self.farm is not None and self.farm.is_fork_join


@dataclass(frozen=True)
class ReplicationOutcome:
    """Statistics of one replication over its post-warmup window.

    ``energy`` is joules over ``window`` seconds, summed over servers.
    """

    response_mean: float
    power_mean: float
    off_fraction: float
    mean_in_system: float
    utilization_gross: float
    utilization_net: float
    jobs_completed: int
    energy: float
    window: float


@dataclass(frozen=True)
class SimResult:
    """Replication means with 95% confidence half-widths.

    ``off_fraction`` is averaged over servers, so ``power_mean`` equals
    n * (P0 f^3 + C) * (1 - off_fraction).
    """

    response_mean: float
    response_ci_halfwidth: float
    power_mean: float
    power_ci_halfwidth: float
    off_fraction: float
    jobs_completed: int
    mean_in_system: float
    mean_in_system_ci_halfwidth: float
    utilization_gross: float
    utilization_net: float
    replications: Tuple[ReplicationOutcome, ...] = field(default=(), repr=False)

    def response_contains(self, value: float) -> bool:
        return _within(value, self.response_mean, self.response_ci_halfwidth)

    def power_contains(self, value: float) -> bool:
        return _within(value, self.power_mean, self.power_ci_halfwidth)


def _within(value: float, center: float, halfwidth: float) -> bool:
    return abs(value - center) <= halfwidth + ROUNDING_SLACK * abs(value)


@dataclass(frozen=True)
class ValidationReport:
    """Analytic prediction next to the simulated estimate."""

    simulated: SimResult
    analytic: Metrics
    response_abs_error: float
    response_rel_error: float
    power_abs_error: float
    power_rel_error: float
    response_in_ci: bool
    power_in_ci: bool

    @property
    def passed(self) -> bool:
        return self.response_in_ci and self.power_in_ci
