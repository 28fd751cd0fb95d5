"""Depth-first augmenting-path search."""

from __future__ import annotations

import numpy as np

from bapcore.apps.graph.models.matching import FREE, Matching
from bapcore.apps.graph.models.tree import AlternatingTree
from bapcore.apps.graph.models.vertex import Vertex
from bapcore.apps.graph.services.graph_service import augment, is_augmenting_path
from bapcore.apps.search.models.search import SearchInput, SearchOutcome
from bapcore.exceptions import SearchInvariantException
from bapcore.logger import get_logger

logger = get_logger(__name__)


def choose_agent(candidates: np.ndarray, weights: np.ndarray, greedy: bool) -> int:
    """Lightest candidate edge (ties to the lower agent) when greedy, else the lowest agent index."""
    if greedy:
        return int(candidates[int(np.argmin(weights))])
    return int(candidates[0])


def aug_dfs(inp: SearchInput, greedy: bool = True) -> SearchOutcome:
    """
    Grow one alternating path from the root task, exploring one agent per pass
    and backtracking through the task stack when the current task has no
    unexplored neighbour. ν starts as the matched tasks; an explored agent points
    at the task it was reached from until it is backtracked.
    """
    inp.validate()
    g, mask, matching = inp.graph, inp.edges & inp.graph.present, inp.matching
    matched = matching.matched_task
    root = inp.root
    n = g.n

    nu = matched.copy()
    explored = np.zeros(g.m, dtype=bool)
    parent_task: dict[int, int] = {}
    task_stack: list[int] = []
    chain: list[int] = []
    explored_per_pass: list[int] = []
    t = root
    iterations = 0
    found = False

    while True:
        iterations += 1
        candidates = np.flatnonzero(mask[:, t] & ~explored)
        if candidates.size == 0:
            explored_per_pass.append(0)
            if t == root:
                break
            # t has no children: step back to the task a* was reached from
            a_star = chain.pop()
            nu[a_star] = matched[a_star]
            t = task_stack.pop()
            continue

        a_star = choose_agent(candidates, g.weight[candidates, t], greedy)
        explored[a_star] = True
        parent_task[a_star] = t
        explored_per_pass.append(1)
        nu[a_star] = t
        chain.append(a_star)
        if matched[a_star] == FREE:
            found = True
            break
        task_stack.append(t)
        t = int(matched[a_star])

    if iterations > 2 * n - 1:
        raise SearchInvariantException(f"Depth-first search took {iterations} passes for {n} tasks")

    tree = explored_tree(root, parent_task, matched)
    if not found:
        return SearchOutcome(
            new_matching=matching,
            found=False,
            path=(),
            iterations=iterations,
            explored_per_pass=tuple(explored_per_pass),
            explored=frozenset(int(i) for i in np.flatnonzero(explored)),
            tree=tree,
        )

    walk = [Vertex.task(root)]
    for a in chain:
        walk.append(Vertex.agent(a))
        if matched[a] != FREE:
            walk.append(Vertex.task(int(matched[a])))

    new_matching = Matching(nu)
    if not is_augmenting_path(walk, matching) or new_matching != augment(matching, walk):
        raise SearchInvariantException("Depth-first search assembled a matching that is not M ⊕ P")

    logger.debug(
        "Augmenting path found",
        extra={"search": "dfs", "path_length": len(walk) - 1, "iterations": iterations},
    )
    return SearchOutcome(
        new_matching=new_matching,
        found=True,
        path=tuple(walk),
        iterations=iterations,
        explored_per_pass=tuple(explored_per_pass),
        explored=frozenset(int(i) for i in np.flatnonzero(explored)),
        tree=tree,
    )


def explored_tree(root: int, parent_task: dict[int, int], matched: np.ndarray) -> AlternatingTree:
    root_v = Vertex.task(root)
    parent: dict[Vertex, Vertex] = {}
    for a, t in parent_task.items():
        parent[Vertex.agent(a)] = Vertex.task(t)
        if matched[a] != FREE:
            parent[Vertex.task(int(matched[a]))] = Vertex.agent(a)

    level: dict[Vertex, int] = {root_v: 0}

    def depth(v: Vertex) -> int:
        if v not in level:
            level[v] = depth(parent[v]) + 1
        return level[v]

    for v in parent:
        depth(v)
    return AlternatingTree(root=root_v, parent=parent, level=level)
