"""Level-parallel breadth-first augmenting-path search."""

from __future__ import annotations

import numpy as np

from bapcore.apps.graph.models.matching import FREE
from bapcore.apps.graph.models.tree import AlternatingTree
from bapcore.apps.graph.models.vertex import Vertex
from bapcore.apps.graph.services.graph_service import augment
from bapcore.apps.search.models.search import SearchInput, SearchOutcome
from bapcore.exceptions import SearchInvariantException
from bapcore.logger import get_logger

logger = get_logger(__name__)


def explore_level(mask: np.ndarray, frontier: list[int], explored: np.ndarray) -> tuple[np.ndarray, dict[int, int]]:
    """
    Unexplored agents adjacent to the frontier tasks, each with its parent: the
    lowest-index frontier task it is adjacent to. frontier must be ascending.
    """
    adjacency = mask[:, frontier]
    level = np.flatnonzero(adjacency.any(axis=1) & ~explored)
    parents = {int(i): frontier[int(np.argmax(adjacency[i]))] for i in level}
    return level, parents


def pick_free_agent(free: list[int], parent_task: dict[int, int]) -> int:
    """First free agent in tree order: lowest parent task, then lowest agent index."""
    return min(free, key=lambda i: (parent_task[i], i))


def aug_bfs(inp: SearchInput) -> SearchOutcome:
    """
    Explore every agent of the next tree level at once. Each pass turns the
    frontier tasks into their unexplored neighbours, then moves the frontier to
    the tasks those agents hold. Returns a shortest augmenting path.
    """
    inp.validate()
    g, mask, matching = inp.graph, inp.edges & inp.graph.present, inp.matching
    matched = matching.matched_task
    owner = matching.task_owner(g.n)
    root = inp.root

    explored = np.zeros(g.m, dtype=bool)
    parent_task: dict[int, int] = {}
    explored_per_pass: list[int] = []
    frontier = [root]
    iterations = 0
    a_f = FREE

    while True:
        iterations += 1
        level, parents = explore_level(mask, frontier, explored)
        if level.size == 0:
            explored_per_pass.append(0)
            break
        explored[level] = True
        parent_task.update(parents)
        explored_per_pass.append(int(level.size))
        free = [int(i) for i in level if matched[i] == FREE]
        if free:
            a_f = pick_free_agent(free, parent_task)
            break
        frontier = sorted(int(matched[i]) for i in level)

    if iterations > g.n:
        raise SearchInvariantException(f"Breadth-first search took {iterations} passes for {g.n} tasks")

    tree = level_tree(root, parent_task, matched)
    explored_set = frozenset(int(i) for i in np.flatnonzero(explored))
    if a_f == FREE:
        return SearchOutcome(
            new_matching=matching,
            found=False,
            path=(),
            iterations=iterations,
            explored_per_pass=tuple(explored_per_pass),
            explored=explored_set,
            tree=tree,
        )

    reversed_walk = [Vertex.agent(a_f)]
    agent = a_f
    while True:
        t = parent_task[agent]
        reversed_walk.append(Vertex.task(t))
        if t == root:
            break
        agent = int(owner[t])
        reversed_walk.append(Vertex.agent(agent))
    walk = list(reversed(reversed_walk))

    new_matching = augment(matching, walk)
    logger.debug(
        "Augmenting path found",
        extra={"search": "bfs", "path_length": len(walk) - 1, "iterations": iterations},
    )
    return SearchOutcome(
        new_matching=new_matching,
        found=True,
        path=tuple(walk),
        iterations=iterations,
        explored_per_pass=tuple(explored_per_pass),
        explored=explored_set,
        tree=tree,
    )


def level_tree(root: int, parent_task: dict[int, int], matched: np.ndarray) -> AlternatingTree:
    root_v = Vertex.task(root)
    parent: dict[Vertex, Vertex] = {}
    level: dict[Vertex, int] = {root_v: 0}
    # parent_task is filled level by level, so parents are always seen first
    for a, t in parent_task.items():
        agent_v = Vertex.agent(a)
        parent[agent_v] = Vertex.task(t)
        level[agent_v] = level[Vertex.task(t)] + 1
        if matched[a] != FREE:
            task_v = Vertex.task(int(matched[a]))
            parent[task_v] = agent_v
            level[task_v] = level[agent_v] + 1
    return AlternatingTree(root=root_v, parent=parent, level=level)
