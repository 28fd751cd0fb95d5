"""Two solved sub-problems of one combined assignment graph."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import FREE, Matching
from bapcore.apps.graph.models.vertex import Edge
from bapcore.apps.graph.services.graph_service import check_maximum, max_edge_in_matching
from bapcore.exceptions import InvalidInputException


@dataclass(frozen=True)
class Partition:
    """
    graph is the combined graph G_3. agents_k / tasks_k list the global indices
    of side k; matching_k is indexed locally (agent p of G_k is agents_k[p]).
    Side 2 may be empty.
    """

    graph: WeightedBipartiteGraph
    agents1: tuple[int, ...]
    tasks1: tuple[int, ...]
    agents2: tuple[int, ...]
    tasks2: tuple[int, ...]
    matching1: Matching
    matching2: Optional[Matching] = None

    @classmethod
    def from_split(
        cls,
        graph: WeightedBipartiteGraph,
        m1: int,
        n1: int,
        matching1: Matching,
        matching2: Optional[Matching] = None,
    ) -> "Partition":
        """First m1 agents and n1 tasks form side 1, the rest side 2."""
        return cls(
            graph=graph,
            agents1=tuple(range(m1)),
            tasks1=tuple(range(n1)),
            agents2=tuple(range(m1, graph.m)),
            tasks2=tuple(range(n1, graph.n)),
            matching1=matching1,
            matching2=matching2,
        )

    @cached_property
    def g1(self) -> WeightedBipartiteGraph:
        return self.graph.subgraph(self.agents1, self.tasks1)

    @cached_property
    def g2(self) -> Optional[WeightedBipartiteGraph]:
        if self.is_single:
            return None
        return self.graph.subgraph(self.agents2, self.tasks2)

    @property
    def is_single(self) -> bool:
        return not self.agents2 and not self.tasks2

    @cached_property
    def e1(self) -> tuple[Edge, float]:
        """Bottleneck edge of M_1 in local indices of G_1."""
        return max_edge_in_matching(self.g1, self.matching1)

    @cached_property
    def e2(self) -> Optional[tuple[Edge, float]]:
        if self.g2 is None or self.matching2 is None:
            return None
        return max_edge_in_matching(self.g2, self.matching2)

    def to_global(self, side: int, e: Edge) -> Edge:
        agents, tasks = (self.agents1, self.tasks1) if side == 1 else (self.agents2, self.tasks2)
        return Edge(agents[e.agent], tasks[e.task])

    def swapped(self) -> "Partition":
        if self.is_single or self.matching2 is None:
            raise InvalidInputException("Cannot swap a partition with an empty second side")
        return Partition(
            graph=self.graph,
            agents1=self.agents2,
            tasks1=self.tasks2,
            agents2=self.agents1,
            tasks2=self.tasks1,
            matching1=self.matching2,
            matching2=self.matching1,
        )

    def union_matching(self) -> Matching:
        """M_1 ∪ M_2 as a matching of G_3."""
        matched = np.full(self.graph.m, FREE, dtype=np.int64)
        parts: list[tuple[int, Matching]] = [(1, self.matching1)]
        if self.matching2 is not None:
            parts.append((2, self.matching2))
        for side, M in parts:
            for e in M.edges():
                g = self.to_global(side, e)
                matched[g.agent] = g.task
        return Matching(matched)

    def validate(self) -> None:
        _check_split(self.graph.m, self.agents1, self.agents2, "agent")
        _check_split(self.graph.n, self.tasks1, self.tasks2, "task")
        if bool(self.agents2) != bool(self.tasks2):
            raise InvalidInputException("Side 2 must have both agents and tasks, or neither")
        if len(self.agents1) < len(self.tasks1) or len(self.agents2) < len(self.tasks2):
            raise InvalidInputException("Each side needs at least as many agents as tasks")
        check_maximum(self.g1, self.matching1)
        if self.g2 is not None:
            if self.matching2 is None:
                raise InvalidInputException("Side 2 is not empty but has no matching")
            check_maximum(self.g2, self.matching2)


def _check_split(total: int, first: Sequence[int], second: Sequence[int], what: str) -> None:
    both = list(first) + list(second)
    if sorted(both) != list(range(total)):
        raise InvalidInputException(f"The two {what} sets must partition the {total} {what}s")
    if not first:
        raise InvalidInputException(f"Side 1 needs at least one {what}")
