"""Weighted bipartite graph."""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from bapcore.apps.graph.models.vertex import Edge, Side, Vertex
from bapcore.exceptions import InvalidGraphException, VertexOutOfRangeException

EdgeFilter = Union[NDArray[np.bool_], Iterable[Edge], None]


class WeightedBipartiteGraph:
    """
    Agents on one side, tasks on the other, with an edge presence mask and a
    weight matrix indexed [agent, task]. Both arrays are read-only after
    construction; filtered edge sets are passed around as boolean masks of the
    same shape.
    """

    __slots__ = ("_present", "_weight", "agent_labels", "task_labels", "positions")

    def __init__(
        self,
        weight: ArrayLike,
        present: Optional[ArrayLike] = None,
        *,
        agent_labels: Optional[Sequence[str]] = None,
        task_labels: Optional[Sequence[str]] = None,
        positions: Optional[tuple[NDArray[np.float64], NDArray[np.float64]]] = None,
    ):
        weight_arr = np.array(weight, dtype=np.float64)
        if weight_arr.ndim != 2 or weight_arr.shape[0] < 1 or weight_arr.shape[1] < 1:
            raise InvalidGraphException(f"Weight matrix must be 2-D and non-empty, got shape {weight_arr.shape}")
        if present is None:
            present_arr = np.ones(weight_arr.shape, dtype=bool)
        else:
            present_arr = np.array(present, dtype=bool)
            if present_arr.shape != weight_arr.shape:
                raise InvalidGraphException(
                    f"Mask shape {present_arr.shape} does not match weight shape {weight_arr.shape}"
                )
        if not np.all(np.isfinite(weight_arr[present_arr])):
            raise InvalidGraphException("Weights of present edges must be finite")
        m, n = weight_arr.shape
        if agent_labels is not None and len(agent_labels) != m:
            raise InvalidGraphException(f"Expected {m} agent labels, got {len(agent_labels)}")
        if task_labels is not None and len(task_labels) != n:
            raise InvalidGraphException(f"Expected {n} task labels, got {len(task_labels)}")

        weight_arr.setflags(write=False)
        present_arr.setflags(write=False)
        self._weight = weight_arr
        self._present = present_arr
        self.agent_labels = list(agent_labels) if agent_labels is not None else None
        self.task_labels = list(task_labels) if task_labels is not None else None
        self.positions = positions

    @classmethod
    def complete(cls, weight: ArrayLike) -> "WeightedBipartiteGraph":
        return cls(weight)

    @property
    def m(self) -> int:
        return int(self._weight.shape[0])

    @property
    def n(self) -> int:
        return int(self._weight.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    @property
    def present(self) -> NDArray[np.bool_]:
        return self._present

    @property
    def weight(self) -> NDArray[np.float64]:
        return self._weight

    @property
    def is_complete(self) -> bool:
        return bool(self._present.all())

    @property
    def edge_count(self) -> int:
        return int(self._present.sum())

    def check_vertex(self, v: Vertex) -> None:
        bound = self.m if v.side is Side.AGENT else self.n
        if not 0 <= v.index < bound:
            raise VertexOutOfRangeException(v, bound)

    def check_edge(self, e: Edge) -> None:
        self.check_vertex(e.agent_vertex)
        self.check_vertex(e.task_vertex)

    def has_edge(self, e: Edge) -> bool:
        self.check_edge(e)
        return bool(self._present[e.agent, e.task])

    def w(self, e: Edge) -> float:
        if not self.has_edge(e):
            raise InvalidGraphException(f"Edge {e} is not present")
        return float(self._weight[e.agent, e.task])

    def vertices(self) -> Iterator[Vertex]:
        for i in range(self.m):
            yield Vertex.agent(i)
        for j in range(self.n):
            yield Vertex.task(j)

    def as_mask(self, edge_filter: EdgeFilter = None) -> NDArray[np.bool_]:
        """Turn an edge filter (mask, edge iterable or None for all edges) into a mask within the graph."""
        if edge_filter is None:
            return self._present.copy()
        if isinstance(edge_filter, np.ndarray):
            if edge_filter.shape != self.shape:
                raise InvalidGraphException(
                    f"Edge mask shape {edge_filter.shape} does not match graph shape {self.shape}"
                )
            return edge_filter.astype(bool) & self._present
        mask = np.zeros(self.shape, dtype=bool)
        for e in edge_filter:
            self.check_edge(e)
            mask[e.agent, e.task] = True
        return mask & self._present

    def edges(self, edge_filter: EdgeFilter = None) -> list[Edge]:
        """Edges in ascending (agent, task) order."""
        agents, tasks = np.nonzero(self.as_mask(edge_filter))
        return [Edge(int(i), int(j)) for i, j in zip(agents, tasks)]

    def below(self, threshold: float) -> NDArray[np.bool_]:
        """Mask of present edges strictly lighter than threshold."""
        return self._present & (self._weight < threshold)

    def subgraph(self, agents: Sequence[int], tasks: Sequence[int]) -> "WeightedBipartiteGraph":
        """Induced subgraph; local index k corresponds to agents[k] / tasks[k]."""
        rows = np.asarray(agents, dtype=int)
        cols = np.asarray(tasks, dtype=int)
        positions = None
        if self.positions is not None:
            positions = (self.positions[0][rows], self.positions[1][cols])
        return WeightedBipartiteGraph(
            self._weight[np.ix_(rows, cols)],
            self._present[np.ix_(rows, cols)],
            agent_labels=[self.agent_labels[k] for k in rows] if self.agent_labels else None,
            task_labels=[self.task_labels[k] for k in cols] if self.task_labels else None,
            positions=positions,
        )

    def label(self, v: Vertex) -> str:
        labels = self.agent_labels if v.is_agent else self.task_labels
        return labels[v.index] if labels else str(v)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedBipartiteGraph):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self._present, other._present)
            and np.array_equal(np.where(self._present, self._weight, 0.0), np.where(other._present, other._weight, 0.0))
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"WeightedBipartiteGraph(m={self.m}, n={self.n}, edges={self.edge_count})"
