"""Synchronous lockstep flooding over the communication graph."""

from __future__ import annotations

from typing import Callable, Iterable, Optional, Sequence, TypeVar

from bapcore.apps.network.models.comm_graph import CommGraph
from bapcore.apps.network.models.metrics import RoundMetrics
from bapcore.exceptions import ConsensusException
from bapcore.logger import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
Merge = Callable[[Iterable[T]], T]


def step(values: Sequence[T], comm: CommGraph, merge: Merge) -> list[T]:
    """
    One tick: every agent combines what it held with what its neighbours held
    at the end of the previous tick.
    """
    return [merge([values[i], *(values[k] for k in comm.neighbors(i))]) for i in range(comm.agent_count)]


def best_of(key: Callable[[object], tuple]) -> Merge:
    """Merge keeping the record with the smallest key; None means nothing proposed."""

    def merge(items: Iterable[Optional[object]]) -> Optional[object]:
        present = [item for item in items if item is not None]
        return min(present, key=key) if present else None

    return merge


def union_of(items: Iterable[frozenset]) -> frozenset:
    out: frozenset = frozenset()
    for item in items:
        out = out | item
    return out


class SynchronousNetwork:
    """Runs D-tick flooding phases on a fixed communication graph and keeps the metrics."""

    def __init__(self, comm: CommGraph, metrics: Optional[RoundMetrics] = None):
        self.comm = comm
        self.metrics = metrics if metrics is not None else RoundMetrics.for_comm(comm)

    @property
    def diameter(self) -> int:
        return self.comm.diameter

    def run_ticks(self, values: Sequence[T], merge: Merge, ticks: int) -> list[T]:
        current = list(values)
        if len(current) != self.comm.agent_count:
            raise ConsensusException(f"{len(current)} agent values for {self.comm.agent_count} agents")
        for _ in range(ticks):
            current = step(current, self.comm, merge)
        return current

    def flood(
        self,
        values: Sequence[T],
        merge: Merge,
        *,
        explored: int = 0,
        payload_items: int = 1,
    ) -> list[T]:
        """One phase of D ticks; after it every agent has merged every agent's initial value."""
        result = self.run_ticks(values, merge, self.diameter)
        self.metrics.record_phase(explored=explored, payload_items=payload_items)
        return result

    def agree(self, values: Sequence[T], merge: Merge, **phase) -> T:
        """Flood, then insist that every agent holds the same value."""
        result = self.flood(values, merge, **phase)
        first = result[0]
        for i, value in enumerate(result[1:], start=1):
            if value != first:
                logger.warning("Agents disagree after a full phase", extra={"agent": i, "ticks": self.diameter})
                raise ConsensusException(
                    f"Agent {i + 1} holds {value!r}, agent 1 holds {first!r} after {self.diameter} ticks"
                )
        return first
