"""Event-driven replication engines.

Two engines share one event loop: threshold-managed servers behind a
Bernoulli dispatcher (a single server is the n = 1 case), and an (n, k)
fork-join farm of always-on servers.
"""

import csv
import logging
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, TextIO

import numpy as np

from sweetspot.errors import EmitError
from sweetspot.simulator.calendar import Event, EventCalendar, EventKind
from sweetspot.simulator.records import ReplicationOutcome, SimConfig
from sweetspot.simulator.server import Server, ServerMode
from sweetspot.simulator.streams import ReplicationStreams

logger = logging.getLogger(__name__)


TRACE_HEADER = ["time", "server_id", "event", "queue_len", "mode"]


class Replication(ABC):
    """One independent replication over a strictly ordered calendar.

    Statistics cover the window from the ``warmup``-th completion (time 0
    when warmup is 0) to the ``horizon``-th completion.
    """

    def __init__(
        self,
        cfg: SimConfig,
        seed: np.random.SeedSequence,
        trace_file: Optional[TextIO] = None,
    ):
        self._cfg = cfg
        self._streams = ReplicationStreams(seed, cfg.n_servers)
        self._calendar = EventCalendar()
        self._servers = [Server(i) for i in range(cfg.n_servers)]
        self._rate = cfg.server.service_rate
        self._lam = cfg.workload.lam
        self._now = 0.0
        self._in_system = 0
        self._area = 0.0
        self._completed = 0
        self._response_sum = 0.0
        self._useful = 0.0
        self._window_open = 0.0
        self._window_modes: List[Dict[ServerMode, float]] = []
        self._window_area = 0.0
        self._window_useful = 0.0
        self._trace = None
        if trace_file is not None:
            self._trace = csv.writer(trace_file, lineterminator="\n")
            self._trace.writerow(TRACE_HEADER)

    def run(self) -> ReplicationOutcome:
        self._initialize()
        self._schedule_arrival()
        if self._cfg.warmup == 0:
            self._open_window()

        while self._completed < self._cfg.horizon:
            event = self._calendar.pop()
            self._area += self._in_system * (event.time - self._now)
            self._now = event.time
            if event.kind == EventKind.ARRIVAL:
                self._in_system += 1
                self._on_arrival()
                self._schedule_arrival()
            elif event.kind == EventKind.DEPARTURE:
                self._on_departure(event)
            else:
                self._on_timer(event)

        return self._close_window()

    @abstractmethod
    def _initialize(self) -> None:
        """Put every server into its initial mode."""

    @abstractmethod
    def _on_arrival(self) -> None:
        """Route a new job to the servers."""

    @abstractmethod
    def _on_departure(self, event: Event) -> None:
        """Handle a completed service."""

    def _on_timer(self, event: Event) -> None:
        pass

    def _schedule_arrival(self) -> None:
        gap = self._streams.arrivals.exponential(self._lam)
        self._calendar.schedule(self._now + gap, EventKind.ARRIVAL)

    def _start_service(self, server: Server) -> None:
        server.enter(ServerMode.BUSY, self._now)
        server.service_start = self._now
        server.service_token += 1
        duration = self._streams.service[server.index].exponential(self._rate)
        self._calendar.schedule(
            self._now + duration, EventKind.DEPARTURE, server.index, server.service_token
        )

    def _record_departure(self, arrival_time: float) -> None:
        self._in_system -= 1
        self._completed += 1
        if self._completed > self._cfg.warmup:
            self._response_sum += self._now - arrival_time
        elif self._completed == self._cfg.warmup:
            self._open_window()

    def _trace_event(self, server: Server, name: str) -> None:
        if self._trace is not None:
            self._trace.writerow(
                [repr(self._now), server.index, name, len(server.queue), server.mode.value]
            )

    def _open_window(self) -> None:
        for server in self._servers:
            server.flush(self._now)
        self._window_open = self._now
        self._window_modes = [dict(server.mode_time) for server in self._servers]
        self._window_area = self._area
        self._window_useful = self._useful

    def _close_window(self) -> ReplicationOutcome:
        for server in self._servers:
            server.flush(self._now)
        window = self._now - self._window_open
        n = len(self._servers)
        active_power = self._cfg.server.active_power

        off_fractions = []
        powered_total = 0.0
        busy_total = 0.0
        for server, start in zip(self._servers, self._window_modes):
            delta = {mode: server.mode_time[mode] - start[mode] for mode in ServerMode}
            unpowered = sum(t for mode, t in delta.items() if not mode.powered)
            powered_total += sum(t for mode, t in delta.items() if mode.powered)
            busy_total += delta[ServerMode.BUSY]
            off_fractions.append(unpowered / window)

        jobs = self._cfg.horizon - self._cfg.warmup
        utilization_gross = busy_total / (n * window)
        if self._cfg.is_fork_join:
            utilization_net = (self._useful - self._window_useful) / (n * window)
        else:
            utilization_net = utilization_gross

        return ReplicationOutcome(
            response_mean=self._response_sum / jobs,
            power_mean=active_power * sum(1.0 - off for off in off_fractions),
            off_fraction=sum(off_fractions) / n,
            mean_in_system=(self._area - self._window_area) / window,
            utilization_gross=utilization_gross,
            utilization_net=utilization_net,
            jobs_completed=jobs,
            energy=active_power * powered_total,
            window=window,
        )


class ThresholdReplication(Replication):
    """Threshold shutdown with optional batching, one policy per server.

    Idle servers wait tau_c before powering off. The first arrival to an
    off server starts a tau_w hold (still off), then a tau_s wake-up, then
    service. Later arrivals only queue.
    """

    def _initialize(self) -> None:
        for server in self._servers:
            self._go_idle(server)

    def _on_arrival(self) -> None:
        n = len(self._servers)
        server = self._servers[0 if n == 1 else self._streams.dispatch.index(n)]
        server.queue.append(self._now)

        if server.mode == ServerMode.IDLE_WAITING:
            server.cancel_timer()
            self._start_service(server)
        elif server.mode == ServerMode.OFF:
            tau_w = self._cfg.policy.tau_w
            if tau_w > 0:
                server.enter(ServerMode.BATCH_HOLD, self._now)
                self._set_timer(server, tau_w)
            else:
                self._wake(server)
        self._trace_event(server, "arrival")

    def _on_departure(self, event: Event) -> None:
        server = self._servers[event.server]
        self._record_departure(server.queue.popleft())
        if server.queue:
            self._start_service(server)
        else:
            self._go_idle(server)
        self._trace_event(server, "departure")

    def _on_timer(self, event: Event) -> None:
        server = self._servers[event.server]
        if event.token != server.timer_token:
            return
        if server.mode == ServerMode.IDLE_WAITING:
            server.enter(ServerMode.OFF, self._now)
            self._trace_event(server, "shutdown")
        elif server.mode == ServerMode.BATCH_HOLD:
            self._wake(server)
            self._trace_event(server, "batch_release")
        elif server.mode == ServerMode.WAKING_UP:
            self._start_service(server)
            self._trace_event(server, "awake")

    def _set_timer(self, server: Server, delay: float) -> None:
        self._calendar.schedule(
            self._now + delay, EventKind.TIMER, server.index, server.new_timer()
        )

    def _go_idle(self, server: Server) -> None:
        tau_c = self._cfg.policy.tau_c
        if tau_c is None:
            server.enter(ServerMode.IDLE_WAITING, self._now)
        elif tau_c == 0:
            server.enter(ServerMode.OFF, self._now)
        else:
            server.enter(ServerMode.IDLE_WAITING, self._now)
            self._set_timer(server, tau_c)

    def _wake(self, server: Server) -> None:
        tau_s = self._cfg.policy.tau_s
        if tau_s > 0:
            server.enter(ServerMode.WAKING_UP, self._now)
            self._set_timer(server, tau_s)
        else:
            self._start_service(server)


class ForkJoinReplication(Replication):
    """(n, k) fork-join: every job is copied to all n servers and leaves
    when k copies finish. Remaining copies are dropped from queues and
    aborted mid-service at no cost.
    """

    def __init__(self, cfg: SimConfig, seed: np.random.SeedSequence, trace_file=None):
        super().__init__(cfg, seed, trace_file)
        self._k = cfg.farm.k
        self._next_job = 0
        # job id -> [arrival time, finished copies]
        self._jobs: Dict[int, list] = {}

    def _initialize(self) -> None:
        for server in self._servers:
            server.enter(ServerMode.IDLE_WAITING, self._now)

    def _on_arrival(self) -> None:
        job = self._next_job
        self._next_job += 1
        self._jobs[job] = [self._now, 0]
        for server in self._servers:
            server.queue.append(job)
            if server.mode == ServerMode.IDLE_WAITING:
                self._start_service(server)
            self._trace_event(server, "arrival")

    def _on_departure(self, event: Event) -> None:
        server = self._servers[event.server]
        if event.token != server.service_token:
            return
        job = server.queue.popleft()
        self._useful += self._now - server.service_start
        state = self._jobs[job]
        state[1] += 1
        if state[1] == self._k:
            del self._jobs[job]
            self._record_departure(state[0])
            for other in self._servers:
                if other is not server:
                    self._abandon(other, job)
        self._serve_next(server)
        self._trace_event(server, "departure")

    def _abandon(self, server: Server, job: int) -> None:
        if not server.queue:
            return
        if server.queue[0] == job and server.mode == ServerMode.BUSY:
            server.service_token += 1
            server.queue.popleft()
            self._serve_next(server)
            self._trace_event(server, "abort")
        elif job in server.queue:
            server.queue.remove(job)
            self._trace_event(server, "cancel")

    def _serve_next(self, server: Server) -> None:
        if server.queue:
            self._start_service(server)
        else:
            server.enter(ServerMode.IDLE_WAITING, self._now)


def run_replication(cfg: SimConfig, index: int, seed: np.random.SeedSequence) -> ReplicationOutcome:
    """Run replication ``index``; only replication 0 writes the trace."""
    engine_cls = ForkJoinReplication if cfg.is_fork_join else ThresholdReplication
    if index == 0 and cfg.trace_path:
        logger.info(f"Writing event trace to {cfg.trace_path}")
        try:
            trace_file = open(cfg.trace_path, "w", newline="", encoding="utf-8")
        except OSError as e:
            raise EmitError(f"cannot open trace file {cfg.trace_path}: {e}")
        with trace_file:
            return engine_cls(cfg, seed, trace_file).run()
    return engine_cls(cfg, seed).run()
