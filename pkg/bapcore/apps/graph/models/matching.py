"""Matching stored as the per-agent matched-task array."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from bapcore.apps.graph.models.vertex import Edge, Side, Vertex
from bapcore.exceptions import InvalidMatchingException

FREE = -1


class Matching:
    """
    matched_task[i] is the task of agent i, or FREE. The edge-set view is
    derived on demand. Instances are values: every operation returns a new one.
    """

    __slots__ = ("_matched_task",)

    def __init__(self, matched_task: ArrayLike):
        arr = np.array(matched_task, dtype=np.int64).reshape(-1)
        if arr.size and arr.min() < FREE:
            raise InvalidMatchingException(f"Invalid task index {int(arr.min())} in matching")
        taken = arr[arr != FREE]
        if taken.size != np.unique(taken).size:
            values, counts = np.unique(taken, return_counts=True)
            duplicated = [int(t) + 1 for t in values[counts > 1]]
            raise InvalidMatchingException(f"Tasks {duplicated} are matched to more than one agent")
        arr.setflags(write=False)
        self._matched_task = arr

    @classmethod
    def empty(cls, m: int) -> "Matching":
        return cls(np.full(m, FREE, dtype=np.int64))

    @classmethod
    def identity(cls, m: int, n: int) -> "Matching":
        """Agent p matched to task p for p < min(m, n)."""
        arr = np.full(m, FREE, dtype=np.int64)
        k = min(m, n)
        arr[:k] = np.arange(k)
        return cls(arr)

    @classmethod
    def from_edges(cls, m: int, edges: Iterable[Edge]) -> "Matching":
        arr = np.full(m, FREE, dtype=np.int64)
        for e in edges:
            if not 0 <= e.agent < m:
                raise InvalidMatchingException(f"Agent index {e.agent} out of range for {m} agents")
            if arr[e.agent] != FREE:
                raise InvalidMatchingException(f"Agent a{e.agent + 1} is matched twice")
            arr[e.agent] = e.task
        return cls(arr)

    @property
    def matched_task(self) -> NDArray[np.int64]:
        return self._matched_task

    @property
    def m(self) -> int:
        return int(self._matched_task.size)

    @property
    def cardinality(self) -> int:
        return int(np.count_nonzero(self._matched_task != FREE))

    def __len__(self) -> int:
        return self.cardinality

    def task_of(self, agent: int) -> int:
        return int(self._matched_task[agent])

    def agent_of(self, task: int) -> int:
        hits = np.flatnonzero(self._matched_task == task)
        return int(hits[0]) if hits.size else FREE

    def task_owner(self, n: int) -> NDArray[np.int64]:
        """owner[j] is the agent matched to task j, or FREE."""
        owner = np.full(n, FREE, dtype=np.int64)
        agents = np.flatnonzero(self._matched_task != FREE)
        owner[self._matched_task[agents]] = agents
        return owner

    def edges(self) -> list[Edge]:
        return [Edge(int(i), int(self._matched_task[i])) for i in np.flatnonzero(self._matched_task != FREE)]

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges())

    def mask(self, n: int) -> NDArray[np.bool_]:
        out = np.zeros((self.m, n), dtype=bool)
        agents = np.flatnonzero(self._matched_task != FREE)
        out[agents, self._matched_task[agents]] = True
        return out

    def contains(self, e: Edge) -> bool:
        return 0 <= e.agent < self.m and self.task_of(e.agent) == e.task

    def __contains__(self, e: object) -> bool:
        return isinstance(e, Edge) and self.contains(e)

    def is_free(self, v: Vertex) -> bool:
        if v.side is Side.AGENT:
            return self.task_of(v.index) == FREE
        return self.agent_of(v.index) == FREE

    def free_agents(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self._matched_task == FREE)]

    def free_tasks(self, n: int) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.task_owner(n) == FREE)]

    def without(self, e: Edge) -> "Matching":
        if not self.contains(e):
            raise InvalidMatchingException(f"Edge {e} is not in the matching")
        arr = self._matched_task.copy()
        arr[e.agent] = FREE
        return Matching(arr)

    def with_edge(self, e: Edge) -> "Matching":
        arr = self._matched_task.copy()
        arr[e.agent] = e.task
        return Matching(arr)

    def is_within(self, mask: NDArray[np.bool_]) -> bool:
        agents = np.flatnonzero(self._matched_task != FREE)
        if agents.size and self._matched_task[agents].max() >= mask.shape[1]:
            return False
        return bool(np.all(mask[agents, self._matched_task[agents]]))

    def weights(self, weight: NDArray[np.float64]) -> NDArray[np.float64]:
        agents = np.flatnonzero(self._matched_task != FREE)
        return weight[agents, self._matched_task[agents]]

    def bottleneck(self, weight: NDArray[np.float64]) -> Optional[float]:
        values = self.weights(weight)
        return float(values.max()) if values.size else None

    def union(self, other: "Matching") -> "Matching":
        if other.m != self.m:
            raise InvalidMatchingException("Matchings are over different agent sets")
        arr = self._matched_task.copy()
        both = (arr != FREE) & (other._matched_task != FREE)
        if both.any():
            raise InvalidMatchingException(f"Agent a{int(np.flatnonzero(both)[0]) + 1} is matched in both parts")
        take = other._matched_task != FREE
        arr[take] = other._matched_task[take]
        return Matching(arr)

    def to_list(self) -> list[int]:
        return [int(t) for t in self._matched_task]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return np.array_equal(self._matched_task, other._matched_task)

    def __hash__(self) -> int:
        return hash(self._matched_task.tobytes())

    def __repr__(self) -> str:
        return "Matching({" + ", ".join(str(e) for e in self.edges()) + "})"


def matching_from_pairs(m: int, pairs: Sequence[tuple[int, int]]) -> Matching:
    """Build from one-based (agent, task) pairs, the labelling used in instance files and figures."""
    return Matching.from_edges(m, (Edge(a - 1, t - 1) for a, t in pairs))
