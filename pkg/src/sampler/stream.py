"""
The one-sided Mallows(N, q) process, generated lazily.

Pi(j) is the Z_j-th smallest positive integer not among Pi(1..j-1), with Z_j i.i.d.
Geom(1-q). The unused values below the running maximum (the frontier) are the only state
needed. There are M_j = frontier - j of them, and the prefix [j] maps onto itself exactly
when none is left.
"""
import logging
from logging import Logger
from typing import Iterator

import numpy as np

import constants
from errors import DomainError
from model.order_statistic import OrderStatisticTree
from model.qparam import QParam
from sampler.rng import RngStream

logger: Logger = logging.getLogger(__name__)

class MallowsStream:
    """
    Iterator over (Pi(j), is_regeneration) for j = 1, 2, ...

    Attributes:
        position: number of values emitted so far.
        frontier: largest value emitted so far.

    The unused values below the frontier sit in an OrderStatisticTree as offsets from the
    frontier at the last regeneration, so the tree is empty, and can be reused as is, each
    time the prefix closes.
    """
    def __init__(self, q: QParam | float, rng: RngStream,
                 batch: int = constants.STREAM_BATCH,
                 capacity: int = constants.STREAM_HOLE_CAPACITY) -> None:
        self.q: QParam = QParam.of(q).require_subcritical("stream_mallows")
        self._rng: RngStream = rng
        self._batch: int = batch
        self._draws: list[int] = []
        self._base: int = 0
        self._holes: OrderStatisticTree = OrderStatisticTree(max(capacity, 1), filled=False)
        self.position: int = 0
        self.frontier: int = 0

    @property
    def M(self) -> int:
        """Running maximum minus position"""
        return self.frontier - self.position

    @property
    def holes(self) -> list[int]:
        """Sorted unused values below the frontier"""
        return [self._base + self._holes.find(k) for k in range(1, len(self._holes) + 1)]

    def _grow(self, needed: int) -> None:
        present = [self._holes.find(k) for k in range(1, len(self._holes) + 1)]
        size = max(2 * self._holes.size, needed)
        logger.debug("stream hole tree grows to %d at position %d", size, self.position)
        self._holes = OrderStatisticTree(size, filled=False)
        for offset in present:
            self._holes.insert(offset)

    def __iter__(self) -> Iterator[tuple[int, bool]]:
        return self

    def __next__(self) -> tuple[int, bool]:
        if not self._draws:
            # reversed so that pop() hands the draws out in generation order
            self._draws = self._rng.geometric(1.0 - self.q.q, self._batch)[::-1].tolist()
        z = self._draws.pop()
        holes = self._holes
        if z <= len(holes):
            value = self._base + holes.pop_kth(z)
        else:
            value = self.frontier + z - len(holes)
            if value - self._base > holes.size:
                self._grow(value - self._base)
                holes = self._holes
            for offset in range(self.frontier + 1 - self._base, value - self._base):
                holes.insert(offset)
            self.frontier = value
        self.position += 1
        if len(holes) == 0:
            self._base = self.frontier
            return value, True
        return value, False

def stream_mallows(q: QParam | float, rng: RngStream) -> MallowsStream:
    """Lazy Mallows(N, q) process for 0 < q < 1."""
    return MallowsStream(q, rng)

def sample_regeneration_gaps(q: QParam | float, rng: RngStream, count: int) -> np.ndarray:
    """
    `count` consecutive regeneration gaps X_1, X_2, ... drawn from the chain
    M_{j+1} = max(M_j, Z) - 1, Z ~ Geom(1-q), whose zeros are the regeneration times.
    """
    qp = QParam.of(q).require_subcritical("sample_regeneration_gaps")
    if count < 0:
        raise DomainError(f"gap count must be nonnegative, got {count}")
    gaps = np.empty(count, dtype=np.int64)
    found = 0
    m = 0
    steps = 0
    while found < count:
        for z in rng.geometric(1.0 - qp.q, constants.STREAM_BATCH).tolist():
            m = (m if m > z else z) - 1
            steps += 1
            if m == 0:
                gaps[found] = steps
                found += 1
                steps = 0
                if found == count:
                    break
    return gaps
