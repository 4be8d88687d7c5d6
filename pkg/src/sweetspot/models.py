"""Domain types shared by the analytic models, simulator and optimizer.

Units are fixed throughout: seconds for time, watts for power, jobs per
second for rates.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from sweetspot.config import ConfigError
from sweetspot.errors import DomainError


# Spelling of an infinite idle threshold in files and outputs
NEVER = "never"


@dataclass(frozen=True)
class ServerParams:
    """Physical description of one DVFS-capable server.

    Attributes:
        p0: Peak dynamic power P0 in watts.
        c: Peripheral power C in watts, drawn whenever the platform is on.
        mu: Service rate at full frequency, jobs per second.
        f: Frequency scaling factor in (0, 1].
    """

    p0: float
    c: float
    mu: float
    f: float = 1.0

    def __post_init__(self):
        if not self.p0 >= 0:
            raise DomainError(f"p0 must be >= 0, got: {self.p0}")
        if not self.c >= 0:
            raise DomainError(f"c must be >= 0, got: {self.c}")
        if not self.mu > 0:
            raise DomainError(f"mu must be > 0, got: {self.mu}")
        if not 0 < self.f <= 1:
            raise DomainError(f"f must lie in (0, 1], got: {self.f}")

    @property
    def active_power(self) -> float:
        """Power drawn while the platform is on: P0*f^3 + C."""
        return self.p0 * self.f ** 3 + self.c

    @property
    def service_rate(self) -> float:
        """Effective service rate mu*f."""
        return self.mu * self.f

    def with_frequency(self, f: float) -> "ServerParams":
        """Return a copy running at frequency scaling f."""
        return replace(self, f=f)


@dataclass(frozen=True)
class Workload:
    """Poisson arrival stream with rate lambda (``lam``)."""

    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"lambda must be > 0, got: {self.lam}")

    def split(self, n: int) -> "Workload":
        """Per-server workload under uniform Bernoulli splitting."""
        return Workload(self.lam / n)


@dataclass(frozen=True)
class Policy:
    """Shutdown and wake-up knobs of the threshold mechanism.

    Attributes:
        tau_c: Idle wait before shutting down; None means never shut down.
        tau_s: Wake-up latency.
        tau_w: Batching delay held after the first arrival while off.
    """

    tau_c: Optional[float] = None
    tau_s: float = 0.0
    tau_w: float = 0.0

    def __post_init__(self):
        if self.tau_c is not None and not self.tau_c >= 0:
            raise DomainError(f"tau_c must be >= 0 or '{NEVER}', got: {self.tau_c}")
        if math.isinf(self.tau_c or 0.0):
            raise DomainError(f"spell an infinite tau_c as '{NEVER}'")
        if not self.tau_s >= 0:
            raise DomainError(f"tau_s must be >= 0, got: {self.tau_s}")
        if not self.tau_w >= 0:
            raise DomainError(f"tau_w must be >= 0, got: {self.tau_w}")

    @classmethod
    def never(cls) -> "Policy":
        """A server that stays on forever."""
        return cls(tau_c=None)

    @property
    def never_shuts_down(self) -> bool:
        return self.tau_c is None

    @property
    def wake_delay(self) -> float:
        """Delay seen by the first job of a busy period that finds the server off."""
        return self.tau_s + self.tau_w


@dataclass(frozen=True)
class DelayMoments:
    """First two moments of the extra delay D of the first job in a busy period."""

    mean: float
    second_moment: float


@dataclass(frozen=True)
class Metrics:
    """Mean response time (seconds) and mean power (watts)."""

    response: float
    power: float


class Dispatch(str, Enum):
    """Farm dispatch rules."""

    BERNOULLI = "bernoulli"
    FORK_JOIN = "forkjoin"


@dataclass(frozen=True)
class FarmConfig:
    """A farm of n identical servers behind a dispatcher.

    Attributes:
        n: Number of servers.
        dispatch: Bernoulli flow splitting or (n, k) fork-join.
        k: Copies that must finish before a fork-join job departs.
    """

    n: int
    dispatch: Dispatch = Dispatch.BERNOULLI
    k: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"farm.n must be >= 1, got: {self.n}")
        if self.dispatch is Dispatch.FORK_JOIN and not 1 <= self.k <= self.n:
            raise ConfigError(f"farm.k must lie in [1, {self.n}], got: {self.k}")

    @classmethod
    def fork_join(cls, n: int, k: int) -> "FarmConfig":
        return cls(n=n, dispatch=Dispatch.FORK_JOIN, k=k)

    @property
    def is_fork_join(self) -> bool:
        return self.dispatch is Dispatch.FORK_JOIN
