"""Search input and outcome."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import FREE, Matching
from bapcore.apps.graph.models.tree import AlternatingTree
from bapcore.apps.graph.models.vertex import Edge, Vertex
from bapcore.apps.graph.services.graph_service import path_edges
from bapcore.exceptions import InvalidInputException


@dataclass(frozen=True)
class SearchInput:
    """
    One augmenting-path search: the removed edge ē = {ī, j̄}, the matching
    M̄ = M minus ē, and the surviving edge set Ē as a mask over the graph.
    """

    graph: WeightedBipartiteGraph
    removed_edge: Edge
    matching: Matching
    edges: NDArray[np.bool_]

    @property
    def root(self) -> int:
        return self.removed_edge.task

    def validate(self) -> None:
        g = self.graph
        g.check_edge(self.removed_edge)
        if self.edges.shape != g.shape:
            raise InvalidInputException(f"Edge mask shape {self.edges.shape} does not match graph {g.shape}")
        if self.matching.m != g.m:
            raise InvalidInputException(f"Matching covers {self.matching.m} agents, graph has {g.m}")
        if self.edges[self.removed_edge.agent, self.removed_edge.task]:
            raise InvalidInputException(f"Removed edge {self.removed_edge} is still in the edge set")
        if not self.matching.is_within(self.edges & g.present):
            raise InvalidInputException("Matching is not contained in the edge set")
        if self.matching.task_of(self.removed_edge.agent) != FREE:
            raise InvalidInputException(f"Owner a{self.removed_edge.agent + 1} of the removed edge is still matched")
        free_tasks = self.matching.free_tasks(g.n)
        if free_tasks != [self.root]:
            raise InvalidInputException(
                f"The root b{self.root + 1} must be the only free task, found {[j + 1 for j in free_tasks]}"
            )


@dataclass(frozen=True)
class SearchOutcome:
    """Result of one search; iterations counts while-loop passes."""

    new_matching: Matching
    found: bool
    path: tuple[Vertex, ...]
    iterations: int
    # agents explored in each pass, zero for backtracking and terminal passes
    explored_per_pass: tuple[int, ...]
    explored: frozenset[int] = frozenset()
    tree: Optional[AlternatingTree] = field(default=None, compare=False)

    @property
    def explored_per_iteration(self) -> tuple[int, ...]:
        """Counts for the passes that explored at least one agent."""
        return tuple(k for k in self.explored_per_pass if k)

    @property
    def path_edges(self) -> list[Edge]:
        return path_edges(self.path)

    @property
    def path_length(self) -> int:
        return max(len(self.path) - 1, 0)

    @property
    def free_agent(self) -> Optional[int]:
        return self.path[-1].index if self.found else None
