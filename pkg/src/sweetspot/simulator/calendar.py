"""Strictly ordered event calendar."""

import heapq
import itertools
from enum import IntEnum
from typing import List, NamedTuple


class EventKind(IntEnum):
    """Event kinds; the value is the tie-break rank at equal timestamps."""

    DEPARTURE = 0
    ARRIVAL = 1
    TIMER = 2


class Event(NamedTuple):
    time: float
    kind: EventKind
    server: int
    seq: int
    token: int


class EventCalendar:
    """Min-heap of events ordered by (time, kind, server, insertion).

    ``token`` lets the owner invalidate a scheduled event without
    removing it from the heap: the owner bumps its own counter and
    ignores events carrying a stale value.
    """

    def __init__(self):
        self._heap: List[Event] = []
        self._seq = itertools.count()

    def schedule(self, time: float, kind: EventKind, server: int = 0, token: int = 0) -> None:
        heapq.heappush(self._heap, Event(time, kind, server, next(self._seq), token))

    def pop(self) -> Event:
        return heapq.heappop(self._heap)

    def __len__(self) -> int:
        return len(self._heap)
