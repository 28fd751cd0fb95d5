"""Strategy dispatch and the exhaustive completeness check for failed searches."""

from __future__ import annotations

from typing import Iterable, Union

from bapcore.apps.graph.models.tree import AlternatingTree
from bapcore.apps.graph.models.vertex import Vertex
from bapcore.apps.graph.services.oracle_service import reachable_agents
from bapcore.apps.search.models.search import SearchInput, SearchOutcome
from bapcore.apps.search.services.bfs_service import aug_bfs
from bapcore.apps.search.services.dfs_service import aug_dfs
from bapcore.config import Strategy

Explored = Union[SearchOutcome, AlternatingTree, Iterable[int]]


def run_search(inp: SearchInput, strategy: Strategy) -> SearchOutcome:
    if strategy is Strategy.BFS:
        return aug_bfs(inp)
    return aug_dfs(inp, greedy=strategy is Strategy.DFS_GREEDY)


def _explored_agents(explored: Explored) -> set[int]:
    if isinstance(explored, SearchOutcome):
        return set(explored.explored)
    if isinstance(explored, AlternatingTree):
        return set(explored.agents)
    return {int(i) for i in explored}


def verify_alternating_search(explored: Explored, inp: SearchInput) -> bool:
    """
    True iff every agent that ends an alternating path from the root inside the
    edge set was explored. Enumerates paths, so only for small instances.
    """
    reachable = reachable_agents(inp.graph, inp.matching, Vertex.task(inp.root), inp.edges)
    return reachable <= _explored_agents(explored)
