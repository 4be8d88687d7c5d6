"""Entry points for running replications."""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List

from sweetspot.config import ConfigError
from sweetspot.errors import UnstableSystemError
from sweetspot.simulator.engine import run_replication
from sweetspot.simulator.estimation import aggregate
from sweetspot.simulator.records import ReplicationOutcome, SimConfig, SimResult
from sweetspot.simulator.streams import replication_seeds

logger = logging.getLogger(__name__)


def check_stability(cfg: SimConfig) -> None:
    """Reject configurations whose queues would grow without bound.

    Fork-join load depends on cancellation and is not checked.

    Raises:
        UnstableSystemError: If lambda (per server) >= mu*f.
    """
    if cfg.is_fork_join:
        return
    per_server = cfg.workload.lam / cfg.n_servers
    capacity = cfg.server.service_rate
    if per_server >= capacity:
        raise UnstableSystemError(
            f"per-server arrival rate {per_server} >= service rate mu*f = {capacity}"
        )


def _run_all(cfg: SimConfig) -> List[ReplicationOutcome]:
    seeds = replication_seeds(cfg.seed, cfg.replications)
    indices = range(cfg.replications)
    if cfg.workers > 1 and cfg.replications > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(run_replication, [cfg] * cfg.replications, indices, seeds))
    return [run_replication(cfg, i, seed) for i, seed in zip(indices, seeds)]


def simulate(cfg: SimConfig) -> SimResult:
    """Simulate the configured server or farm.

    Fork-join farms are handed to ``simulate_forkjoin``.

    Raises:
        UnstableSystemError: If a checkable stability condition fails.
    """
    if cfg.is_fork_join:
        return simulate_forkjoin(cfg)
    check_stability(cfg)
    logger.info(
        f"Simulating {cfg.n_servers} server(s): {cfg.replications} replication(s) "
        f"x {cfg.horizon} completions, seed={cfg.seed}"
    )
    result = aggregate(_run_all(cfg))
    logger.debug(f"Simulation result: {result}")
    return result


def simulate_forkjoin(cfg: SimConfig) -> SimResult:
    """Simulate an (n, k) fork-join farm of always-on servers.

    Raises:
        ConfigError: If the farm is not a fork-join farm.
    """
    if not cfg.is_fork_join:
        raise ConfigError("simulate_forkjoin needs farm.dispatch=forkjoin")
    farm = cfg.farm
    logger.info(
        f"Simulating ({farm.n}, {farm.k}) fork-join: {cfg.replications} replication(s) "
        f"x {cfg.horizon} completions, seed={cfg.seed}"
    )
    result = aggregate(_run_all(cfg))
    logger.info(
        f"Fork-join utilization gross={result.utilization_gross} net={result.utilization_net}"
    )
    return result
