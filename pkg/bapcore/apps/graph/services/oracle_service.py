"""Oracle service: maximum-cardinality matching and exhaustive witnesses used to check the solvers."""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Optional

import numpy as np
from numpy.typing import NDArray

from bapcore.apps.graph.models.graph import EdgeFilter, WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import FREE, Matching
from bapcore.apps.graph.models.vertex import Edge, Vertex
from bapcore.config import settings
from bapcore.exceptions import InstanceTooLargeException
from bapcore.logger import get_logger

logger = get_logger(__name__)

# numpy permutation tables above this many rows are built recursively instead
_VECTORISED_PERMUTATION_LIMIT = math.factorial(8)


def mcm_oracle(g: WeightedBipartiteGraph, edge_filter: EdgeFilter = None) -> Matching:
    """
    Maximum-cardinality matching by repeated augmentation (Kuhn). Free agents
    are tried in ascending order and tasks are scanned in ascending order.
    """
    mask = g.as_mask(edge_filter)
    if mask.all():
        return Matching.identity(g.m, g.n)

    adjacency = [np.flatnonzero(mask[i]).tolist() for i in range(g.m)]
    owner = [FREE] * g.n

    def try_agent(i: int, seen: list[bool]) -> bool:
        for j in adjacency[i]:
            if seen[j]:
                continue
            seen[j] = True
            if owner[j] == FREE or try_agent(owner[j], seen):
                owner[j] = i
                return True
        return False

    for i in range(g.m):
        if adjacency[i]:
            try_agent(i, [False] * g.n)

    matched = np.full(g.m, FREE, dtype=np.int64)
    for j, i in enumerate(owner):
        if i != FREE:
            matched[i] = j
    return Matching(matched)


def _check_size(g: WeightedBipartiteGraph, limit: int) -> None:
    if g.n > limit:
        raise InstanceTooLargeException(g.n, limit)


def _complete_square_bottleneck(weight: NDArray[np.float64]) -> tuple[Matching, float]:
    n = weight.shape[0]
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    # perms[k, i] is the task of agent i in candidate k
    values = weight[np.arange(n), perms].max(axis=1)
    best = int(np.argmin(values))
    return Matching(perms[best]), float(values[best])


def brute_force_bottleneck(g: WeightedBipartiteGraph) -> tuple[Matching, float]:
    """
    Exhaustive minimisation of the heaviest edge over all maximum-cardinality
    matchings. Refuses instances with more than MAX_ORACLE_TASKS tasks.
    """
    _check_size(g, settings.MAX_ORACLE_TASKS)
    if g.is_complete and g.m == g.n and math.factorial(g.n) <= _VECTORISED_PERMUTATION_LIMIT:
        return _complete_square_bottleneck(g.weight)

    target = mcm_oracle(g).cardinality
    if target == 0:
        return Matching.empty(g.m), float("-inf")

    mask = g.present
    weight = g.weight
    order_by_task = [
        sorted(np.flatnonzero(mask[:, j]).tolist(), key=lambda i, j=j: (weight[i, j], i)) for j in range(g.n)
    ]
    best_value = math.inf
    best: Optional[list[int]] = None
    assigned = [FREE] * g.m
    used = [False] * g.m

    def search(j: int, matched: int, current: float) -> None:
        nonlocal best_value, best
        if current >= best_value:
            return
        if matched + (g.n - j) < target:
            return
        if j == g.n:
            best_value = current
            best = assigned.copy()
            return
        for i in order_by_task[j]:
            if used[i]:
                continue
            used[i] = True
            assigned[i] = j
            search(j + 1, matched + 1, max(current, float(weight[i, j])))
            used[i] = False
            assigned[i] = FREE
        search(j + 1, matched, current)

    search(0, 0, -math.inf)
    assert best is not None
    logger.debug("Brute force finished", extra={"n": g.n, "m": g.m, "value": best_value})
    return Matching(best), best_value


def iter_alternating_paths(
    g: WeightedBipartiteGraph, M: Matching, root: Vertex, edge_filter: EdgeFilter = None
) -> Iterator[list[Vertex]]:
    """
    Every alternating path (as a vertex walk) that starts at root, in either
    parity. Exponential; only meant for instances with a handful of tasks.
    """
    _check_size(g, settings.MAX_PATH_ENUMERATION_TASKS)
    mask = g.as_mask(edge_filter)
    owner = M.task_owner(g.n)

    def step(v: Vertex, via_matched: Optional[bool]) -> list[tuple[Vertex, bool]]:
        out: list[tuple[Vertex, bool]] = []
        if v.is_agent:
            match = M.task_of(v.index)
            for j in np.flatnonzero(mask[v.index]):
                is_m = int(j) == match
                if via_matched is None or is_m != via_matched:
                    out.append((Vertex.task(int(j)), is_m))
        else:
            match = int(owner[v.index])
            for i in np.flatnonzero(mask[:, v.index]):
                is_m = int(i) == match
                if via_matched is None or is_m != via_matched:
                    out.append((Vertex.agent(int(i)), is_m))
        return out

    def extend(walk: list[Vertex], via_matched: Optional[bool]) -> Iterator[list[Vertex]]:
        for u, is_m in step(walk[-1], via_matched):
            if u in walk:
                continue
            walk.append(u)
            yield list(walk)
            yield from extend(walk, is_m)
            walk.pop()

    yield from extend([root], None)


def iter_augmenting_paths(g: WeightedBipartiteGraph, M: Matching, edge_filter: EdgeFilter = None) -> Iterator[list[Vertex]]:
    """Every augmenting path, each listed once starting from its free task."""
    for j in M.free_tasks(g.n):
        for walk in iter_alternating_paths(g, M, Vertex.task(j), edge_filter):
            end = walk[-1]
            if end.is_agent and M.task_of(end.index) == FREE:
                yield walk


def shortest_augmenting_path_length(
    g: WeightedBipartiteGraph, M: Matching, root: Vertex, edge_filter: EdgeFilter = None
) -> Optional[int]:
    """Edge count of the shortest augmenting path from root, or None."""
    lengths = [
        len(walk) - 1
        for walk in iter_alternating_paths(g, M, root, edge_filter)
        if walk[-1].is_agent and M.task_of(walk[-1].index) == FREE
    ]
    return min(lengths) if lengths else None


def reachable_agents(g: WeightedBipartiteGraph, M: Matching, root: Vertex, edge_filter: EdgeFilter = None) -> set[int]:
    """Agents at the end of some alternating path from root whose first edge is unmatched."""
    found: set[int] = set()
    for walk in iter_alternating_paths(g, M, root, edge_filter):
        first_matched = M.contains(Edge.between(walk[0], walk[1]))
        if walk[-1].is_agent and not first_matched:
            found.add(walk[-1].index)
    return found


def count_alternating_paths(
    g: WeightedBipartiteGraph, M: Matching, source: Vertex, target: Vertex, edge_filter: EdgeFilter = None
) -> int:
    return sum(1 for walk in iter_alternating_paths(g, M, source, edge_filter) if walk[-1] == target)
