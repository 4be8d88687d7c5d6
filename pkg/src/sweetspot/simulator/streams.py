"""Seeded random streams for the simulator.

Seed splitting: the root seed feeds ``numpy.random.SeedSequence``; its
``spawn(replications)`` children seed one replication each, and every
replication spawns ``2 + n`` grandchildren in a fixed order: arrivals,
dispatch, then service for server 0..n-1. Results therefore do not
depend on the order in which replications execute.
"""

import math
from typing import List

import numpy as np

BLOCK_SIZE = 4096
ARRIVAL_STREAM = 0
DISPATCH_STREAM = 1
FIRST_SERVICE_STREAM = 2


def replication_seeds(root_seed: int, replications: int) -> List[np.random.SeedSequence]:
    """One independent seed sequence per replication."""
    return np.random.SeedSequence(root_seed).spawn(replications)


class UniformStream:
    """Uniform variates on [0, 1), drawn from numpy in blocks."""

    def __init__(self, seed: np.random.SeedSequence, block_size: int = BLOCK_SIZE):
        self._rng = np.random.default_rng(seed)
        self._block_size = block_size
        self._buffer: List[float] = []
        self._pos = 0

    def uniform(self) -> float:
        if self._pos == len(self._buffer):
            self._buffer = self._rng.random(self._block_size).tolist()
            self._pos = 0
        u = self._buffer[self._pos]
        self._pos += 1
        return u

    def exponential(self, rate: float) -> float:
        """Inverse transform; 1 - u lies in (0, 1] so the log is finite."""
        return -math.log1p(-self.uniform()) / rate

    def index(self, n: int) -> int:
        """Uniform choice among n slots."""
        return int(self.uniform() * n)


class ReplicationStreams:
    """The named streams of one replication."""

    def __init__(self, seed: np.random.SeedSequence, n_servers: int):
        children = seed.spawn(FIRST_SERVICE_STREAM + n_servers)
        self.arrivals = UniformStream(children[ARRIVAL_STREAM])
        self.dispatch = UniformStream(children[DISPATCH_STREAM])
        self.service = [UniformStream(child) for child in children[FIRST_SERVICE_STREAM:]]
