"""What a single agent knows."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from bapcore.apps.graph.models.matching import FREE
from bapcore.apps.graph.models.vertex import Edge


@dataclass(frozen=True, eq=False)
class AgentLocalState:
    """
    Agent i's row of the problem: its incident edges E_i with weights W_i, the
    locally pruned edges Ē_i and its search bookkeeping. The frontier and the
    task stack are replicated: every agent holds the same copy.
    """

    id: int
    incident_edges: NDArray[np.bool_]
    weights: NDArray[np.float64]
    matched_task: int = FREE
    parent_task: int = FREE
    pruned_local: Optional[NDArray[np.bool_]] = None
    explored: bool = False
    # task the agent was first reached from; kept across backtracks
    reached_from: int = FREE
    dfs_task_stack: tuple[int, ...] = ()
    current_task: int = FREE
    frontier: tuple[int, ...] = ()
    descendant_tasks: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.pruned_local is None:
            object.__setattr__(self, "pruned_local", self.incident_edges.copy())

    @property
    def task_count(self) -> int:
        return int(self.incident_edges.size)

    @property
    def is_free(self) -> bool:
        return self.matched_task == FREE

    def w(self, task: int) -> float:
        return float(self.weights[task])

    def matched_edge(self) -> Optional[tuple[Edge, float]]:
        if self.matched_task == FREE:
            return None
        return Edge(self.id, self.matched_task), self.w(self.matched_task)

    def lightest_edge(self, tasks: Optional[NDArray[np.bool_]] = None) -> Optional[tuple[Edge, float]]:
        """Lightest incident edge, optionally restricted to a task mask; ties to the lower task."""
        mask = self.incident_edges if tasks is None else self.incident_edges & tasks
        options = np.flatnonzero(mask)
        if options.size == 0:
            return None
        j = int(options[int(np.argmin(self.weights[options]))])
        return Edge(self.id, j), self.w(j)

    def can_reach(self, task: int) -> bool:
        return bool(self.pruned_local[task])

    def reset_search(self) -> "AgentLocalState":
        return replace(
            self,
            parent_task=self.matched_task,
            explored=False,
            reached_from=FREE,
            dfs_task_stack=(),
            current_task=FREE,
            frontier=(),
            descendant_tasks=frozenset(),
        )

    def with_changes(self, **changes) -> "AgentLocalState":
        return replace(self, **changes)
