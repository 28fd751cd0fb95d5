"""Alternating trees and pruned edge sets."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from bapcore.apps.graph.models.vertex import Edge, Vertex


@dataclass(frozen=True)
class AlternatingTree:
    """Rooted parent/level structure over the vertices reached by an alternating search."""

    root: Vertex
    parent: dict[Vertex, Vertex] = field(default_factory=dict)
    level: dict[Vertex, int] = field(default_factory=dict)
    # edges attributed to the tree; defaults to the parent links
    edges: frozenset[Edge] = frozenset()

    def __post_init__(self) -> None:
        if self.root not in self.level:
            self.level[self.root] = 0
        if not self.edges:
            object.__setattr__(
                self, "edges", frozenset(Edge.between(child, par) for child, par in self.parent.items())
            )

    @property
    def vertices(self) -> frozenset[Vertex]:
        return frozenset(self.level)

    @property
    def agents(self) -> list[int]:
        return sorted(v.index for v in self.level if v.is_agent)

    @property
    def tasks(self) -> list[int]:
        return sorted(v.index for v in self.level if not v.is_agent)

    def __contains__(self, v: object) -> bool:
        return v in self.level

    def path_to_root(self, v: Vertex) -> list[Vertex]:
        """Vertex walk from v up to the root."""
        walk = [v]
        while walk[-1] != self.root:
            walk.append(self.parent[walk[-1]])
        return walk


@dataclass(frozen=True)
class PrunedEdgeSet:
    """Matching edges plus every edge strictly lighter than the matching's heaviest edge."""

    mask: NDArray[np.bool_]
    threshold: float

    @property
    def edges(self) -> frozenset[Edge]:
        agents, tasks = np.nonzero(self.mask)
        return frozenset(Edge(int(i), int(j)) for i, j in zip(agents, tasks))

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __contains__(self, e: object) -> bool:
        return isinstance(e, Edge) and bool(self.mask[e.agent, e.task])

    def without(self, e: Edge) -> NDArray[np.bool_]:
        out = self.mask.copy()
        out[e.agent, e.task] = False
        return out
