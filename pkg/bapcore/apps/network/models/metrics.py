"""Time-step and message accounting for synchronous runs."""

from __future__ import annotations

from typing import TYPE_CHECKING, ClassVar, List

from pydantic import BaseModel, Field

if TYPE_CHECKING:
    from bapcore.apps.network.models.comm_graph import CommGraph
    from bapcore.apps.pruner.models.trace import PruneTrace


class TickRecord(BaseModel):
    tick: int = Field(ge=1)
    msgs: int = Field(ge=0)
    explored: int = Field(ge=0)
    payload_items: int = Field(ge=0)

    def csv_row(self) -> list[int]:
        return [self.tick, self.msgs, self.explored, self.payload_items]


class RoundMetrics(BaseModel):
    """
    Totals over a run. Every phase (one consensus or one search pass) lasts D
    ticks and every tick carries one message per direction of every link.
    """

    CSV_COLUMNS: ClassVar[List[str]] = ["tick", "msgs", "explored", "payload_items"]

    diameter: int = Field(default=0, ge=0)
    messages_per_tick: int = Field(default=0, ge=0)
    phases: int = 0
    time_steps: int = 0
    messages_sent: int = 0
    explored_per_D_steps: List[int] = Field(default_factory=list)
    max_payload_items: int = 0
    ticks: List[TickRecord] = Field(default_factory=list)

    @classmethod
    def for_comm(cls, comm: "CommGraph") -> "RoundMetrics":
        return cls(diameter=comm.diameter, messages_per_tick=comm.messages_per_tick)

    def record_phase(self, explored: int = 0, payload_items: int = 1) -> None:
        """Account for one D-tick phase; explored counts agents added to a search tree."""
        self.phases += 1
        for k in range(self.diameter):
            self.ticks.append(
                TickRecord(
                    tick=self.time_steps + k + 1,
                    msgs=self.messages_per_tick,
                    explored=explored if k == self.diameter - 1 else 0,
                    payload_items=payload_items,
                )
            )
        self.time_steps += self.diameter
        self.messages_sent += self.diameter * self.messages_per_tick
        if explored:
            self.explored_per_D_steps.append(explored)
        self.max_payload_items = max(self.max_payload_items, payload_items)

    def extend(self, other: "RoundMetrics") -> None:
        """Append a later run on the same network."""
        for row in other.ticks:
            self.ticks.append(row.model_copy(update={"tick": row.tick + self.time_steps}))
        self.phases += other.phases
        self.time_steps += other.time_steps
        self.messages_sent += other.messages_sent
        self.explored_per_D_steps.extend(other.explored_per_D_steps)
        self.max_payload_items = max(self.max_payload_items, other.max_payload_items)

    @property
    def max_explored_per_round(self) -> int:
        return max(self.explored_per_D_steps, default=0)

    @property
    def mean_explored_per_round(self) -> float:
        if not self.explored_per_D_steps:
            return 0.0
        return sum(self.explored_per_D_steps) / len(self.explored_per_D_steps)

    @classmethod
    def from_trace(cls, trace: "PruneTrace", comm: "CommGraph") -> "RoundMetrics":
        """
        Metrics the simulator produces for this trace: one max-consensus phase per
        pruning pass followed by one phase per search pass.
        """
        metrics = cls.for_comm(comm)
        for record in trace.records:
            metrics.record_phase(explored=0, payload_items=1)
            for explored in record.explored_per_pass:
                metrics.record_phase(explored=explored, payload_items=explored)
        return metrics

    def csv_rows(self) -> list[list[int]]:
        return [row.csv_row() for row in self.ticks]
