"""Agent communication graph."""

from __future__ import annotations

from typing import Iterable

import networkx as nx

from bapcore.apps.network.utils.topology import build_topology
from bapcore.exceptions import TopologyException


class CommGraph:
    """Undirected, connected, time-invariant communication links between agents."""

    __slots__ = ("agent_count", "links", "diameter", "_neighbors")

    def __init__(self, agent_count: int, links: Iterable[tuple[int, int]]):
        if agent_count < 1:
            raise TopologyException("A communication graph needs at least one agent")
        graph = nx.Graph()
        graph.add_nodes_from(range(agent_count))
        for i, j in links:
            if not (0 <= i < agent_count and 0 <= j < agent_count):
                raise TopologyException(f"Link ({i}, {j}) is out of range for {agent_count} agents")
            if i != j:
                graph.add_edge(int(i), int(j))
        if not nx.is_connected(graph):
            raise TopologyException(
                f"Communication graph over {agent_count} agents has "
                f"{nx.number_connected_components(graph)} components"
            )
        self.agent_count = agent_count
        self.links: frozenset[tuple[int, int]] = frozenset((min(u, v), max(u, v)) for u, v in graph.edges())
        self.diameter: int = nx.diameter(graph) if agent_count > 1 else 0
        self._neighbors: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(graph.neighbors(i))) for i in range(agent_count)
        )

    @classmethod
    def from_graph(cls, graph: nx.Graph) -> "CommGraph":
        return cls(graph.number_of_nodes(), graph.edges())

    @classmethod
    def from_spec(cls, spec: str, agent_count: int, *, seed: int = 0) -> "CommGraph":
        return cls.from_graph(build_topology(spec, agent_count, seed=seed))

    @classmethod
    def complete(cls, agent_count: int) -> "CommGraph":
        return cls.from_spec("complete", agent_count)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._neighbors[i]

    @property
    def messages_per_tick(self) -> int:
        """Every agent sends its state to every neighbour once per tick."""
        return 2 * len(self.links)

    def __repr__(self) -> str:
        return f"CommGraph(agents={self.agent_count}, links={len(self.links)}, D={self.diameter})"
