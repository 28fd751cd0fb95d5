"""Per-iteration trace of pruneBAP."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, List

from pydantic import BaseModel, Field

from bapcore.apps.graph.models.matching import Matching
from bapcore.apps.graph.models.vertex import Edge
from bapcore.config import Strategy


class PruneRecord(BaseModel):
    """One while-loop pass: the removed edge, its weight and the search that followed."""

    CSV_COLUMNS: ClassVar[List[str]] = [
        "iteration",
        "removed_agent",
        "removed_task",
        "weight",
        "edges_left",
        "found",
        "search_iters",
        "path_length",
        "matching_weight",
    ]

    iteration: int = Field(ge=1)
    removed_agent: int = Field(ge=0)
    removed_task: int = Field(ge=0)
    weight: float
    edges_left: int = Field(ge=0)
    found: bool
    search_iters: int = Field(ge=1)
    explored_per_pass: List[int] = Field(default_factory=list)
    path_length: int = 0
    # heaviest edge of the matching held after this pass
    matching_weight: float

    @property
    def explored(self) -> List[int]:
        return [k for k in self.explored_per_pass if k]

    @property
    def removed_edge(self) -> Edge:
        return Edge(self.removed_agent, self.removed_task)

    def csv_row(self) -> list:
        """Row for the trace CSV; agent and task numbers are one-based."""
        return [
            self.iteration,
            self.removed_agent + 1,
            self.removed_task + 1,
            self.weight,
            self.edges_left,
            int(self.found),
            self.search_iters,
            self.path_length,
            self.matching_weight,
        ]


@dataclass
class PruneTrace:
    strategy: Strategy
    initial_matching: Matching
    initial_weight: float
    records: list[PruneRecord] = field(default_factory=list)
    final_matching: Matching | None = None
    final_bottleneck: tuple[Edge, float] | None = None

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def removed_edges(self) -> list[Edge]:
        return [r.removed_edge for r in self.records]

    @property
    def bottleneck_weights(self) -> list[float]:
        return [r.weight for r in self.records]

    @property
    def weight_history(self) -> list[float]:
        """Heaviest matched weight before the first pass and after every pass."""
        return [self.initial_weight] + [r.matching_weight for r in self.records]

    @property
    def search_iterations(self) -> int:
        return sum(r.search_iters for r in self.records)

    @property
    def final_weight(self) -> float:
        assert self.final_bottleneck is not None
        return self.final_bottleneck[1]
