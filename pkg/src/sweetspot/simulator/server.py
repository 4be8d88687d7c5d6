"""Per-server state and time accounting."""

from collections import deque
from enum import Enum
from typing import Deque, Dict


class ServerMode(str, Enum):
    """Operating modes of a power-managed server.

    The platform is powered only in BUSY, IDLE_WAITING and WAKING_UP;
    BATCH_HOLD happens while still shut down.
    """

    BUSY = "busy"
    IDLE_WAITING = "idle_waiting"
    OFF = "off"
    BATCH_HOLD = "batch_hold"
    WAKING_UP = "waking_up"

    @property
    def powered(self) -> bool:
        return self in POWERED_MODES


POWERED_MODES = frozenset({ServerMode.BUSY, ServerMode.IDLE_WAITING, ServerMode.WAKING_UP})


class Server:
    """One server: its mode, FIFO queue and accumulated time per mode.

    The job at the head of ``queue`` is the one in service while BUSY.
    ``timer_token`` and ``service_token`` version the pending timer and
    departure so superseded calendar entries can be recognized.
    """

    def __init__(self, index: int, mode: ServerMode = ServerMode.IDLE_WAITING, now: float = 0.0):
        self.index = index
        self.mode = mode
        self.mode_entry_time = now
        self.queue: Deque = deque()
        self.timer_token = 0
        self.service_token = 0
        self.service_start = now
        self.mode_time: Dict[ServerMode, float] = {m: 0.0 for m in ServerMode}

    def enter(self, mode: ServerMode, now: float) -> None:
        """Close the current mode interval and start a new one."""
        self.mode_time[self.mode] += now - self.mode_entry_time
        self.mode = mode
        self.mode_entry_time = now

    def flush(self, now: float) -> None:
        """Credit time spent so far in the current mode."""
        self.mode_time[self.mode] += now - self.mode_entry_time
        self.mode_entry_time = now

    def new_timer(self) -> int:
        self.timer_token += 1
        return self.timer_token

    def cancel_timer(self) -> None:
        self.timer_token += 1
