"""Graph service: neighbourhoods, paths, augmentation, pruning and alternating reachability."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from numpy.typing import NDArray

from bapcore.apps.graph.models.graph import EdgeFilter, WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import FREE, Matching
from bapcore.apps.graph.models.tree import AlternatingTree, PrunedEdgeSet
from bapcore.apps.graph.models.vertex import Edge, Side, Vertex
from bapcore.apps.graph.services.oracle_service import mcm_oracle
from bapcore.exceptions import (
    EmptyMatchingException,
    InvalidMatchingException,
    InvalidPathException,
    NotMaximumMatchingException,
    SearchInvariantException,
)

PathLike = Union[Sequence[Vertex], Sequence[Edge]]


def neighbors(g: WeightedBipartiteGraph, v: Vertex, edge_filter: EdgeFilter = None) -> list[Vertex]:
    """Neighbours of v inside the filtered edge set, ascending by index."""
    g.check_vertex(v)
    mask = g.as_mask(edge_filter)
    if v.is_agent:
        return [Vertex.task(int(j)) for j in np.flatnonzero(mask[v.index])]
    return [Vertex.agent(int(i)) for i in np.flatnonzero(mask[:, v.index])]


def _walk_from_edges(path: Sequence[Edge]) -> list[Vertex]:
    if len(path) == 1:
        return [path[0].task_vertex, path[0].agent_vertex]
    first, second = path[0], path[1]
    shared = {first.agent_vertex, first.task_vertex} & {second.agent_vertex, second.task_vertex}
    if len(shared) != 1:
        raise InvalidPathException(f"Edges {first} and {second} are not consecutive")
    (joint,) = shared
    walk = [first.other(joint), joint]
    for e in path[1:]:
        if walk[-1] not in (e.agent_vertex, e.task_vertex):
            raise InvalidPathException(f"Edge {e} does not continue the path at {walk[-1]}")
        walk.append(e.other(walk[-1]))
    return walk


def as_walk(path: PathLike, g: Optional[WeightedBipartiteGraph] = None) -> list[Vertex]:
    """
    Normalise a path to its vertex walk and check it is a path: distinct vertices,
    alternating sides and (when g is given) present edges between consecutive vertices.
    """
    items = list(path)
    if not items:
        return []
    if all(isinstance(item, Edge) for item in items):
        walk = _walk_from_edges(items)  # type: ignore[arg-type]
    elif all(isinstance(item, Vertex) for item in items):
        walk = items  # type: ignore[assignment]
        if len(walk) < 2:
            raise InvalidPathException("A path needs at least two vertices")
    else:
        raise InvalidPathException("A path is a sequence of vertices or a sequence of edges")

    if len(set(walk)) != len(walk):
        repeated = sorted({str(v) for v in walk if walk.count(v) > 1})
        raise InvalidPathException(f"Vertices {repeated} repeat along the path")
    for u, v in zip(walk, walk[1:]):
        if u.side is v.side:
            raise InvalidPathException(f"{u} and {v} are on the same side")
        if g is not None and not g.has_edge(Edge.between(u, v)):
            raise InvalidPathException(f"Edge {Edge.between(u, v)} is not in the graph")
    return walk


def path_edges(walk: Sequence[Vertex]) -> list[Edge]:
    return [Edge.between(u, v) for u, v in zip(walk, walk[1:])]


def is_alternating_path(path: PathLike, M: Matching, g: Optional[WeightedBipartiteGraph] = None) -> bool:
    """True iff consecutive edges of the path alternate between M and the rest."""
    walk = as_walk(path, g)
    if not walk:
        return False
    in_matching = [M.contains(e) for e in path_edges(walk)]
    return all(a != b for a, b in zip(in_matching, in_matching[1:]))


def is_augmenting_path(path: PathLike, M: Matching, g: Optional[WeightedBipartiteGraph] = None) -> bool:
    """True iff the path alternates and both of its endpoints are free."""
    walk = as_walk(path, g)
    if not walk:
        return False
    return is_alternating_path(walk, M) and M.is_free(walk[0]) and M.is_free(walk[-1])


def augment(M: Matching, path: PathLike, g: Optional[WeightedBipartiteGraph] = None) -> Matching:
    """Symmetric difference of M with an augmenting path."""
    walk = as_walk(path, g)
    if not is_augmenting_path(walk, M):
        raise InvalidPathException("Path is not augmenting relative to the matching")
    arr = M.matched_task.copy()
    edges = path_edges(walk)
    for e in edges:
        if M.contains(e):
            arr[e.agent] = FREE
    for e in edges:
        if not M.contains(e):
            arr[e.agent] = e.task
    result = Matching(arr)
    if result.cardinality != M.cardinality + 1:
        raise SearchInvariantException(
            f"Augmentation produced cardinality {result.cardinality} from {M.cardinality}"
        )
    return result


def check_matching(g: WeightedBipartiteGraph, M: Matching, edge_filter: EdgeFilter = None) -> None:
    if M.m != g.m:
        raise InvalidMatchingException(f"Matching covers {M.m} agents, graph has {g.m}")
    if not M.is_within(g.as_mask(edge_filter)):
        raise InvalidMatchingException("Matching uses edges outside the graph")


def is_maximum(g: WeightedBipartiteGraph, M: Matching, edge_filter: EdgeFilter = None) -> bool:
    return mcm_oracle(g, edge_filter).cardinality == M.cardinality


def check_maximum(g: WeightedBipartiteGraph, M: Matching, edge_filter: EdgeFilter = None) -> None:
    check_matching(g, M, edge_filter)
    maximum = mcm_oracle(g, edge_filter).cardinality
    if maximum != M.cardinality:
        raise NotMaximumMatchingException(M.cardinality, maximum)


def max_edge_in_matching(g: WeightedBipartiteGraph, M: Matching) -> tuple[Edge, float]:
    """Heaviest matched edge; ties go to the lowest agent index."""
    check_matching(g, M)
    if M.cardinality == 0:
        raise EmptyMatchingException("Cannot take the maximum edge of an empty matching")
    agents = np.flatnonzero(M.matched_task != FREE)
    weights = g.weight[agents, M.matched_task[agents]]
    k = int(np.argmax(weights))
    return Edge(int(agents[k]), int(M.matched_task[agents[k]])), float(weights[k])


def pruned_mask(g: WeightedBipartiteGraph, M: Matching) -> tuple[NDArray[np.bool_], float]:
    threshold = M.bottleneck(g.weight)
    if threshold is None:
        raise EmptyMatchingException("A pruned edge set needs a non-empty matching")
    return g.below(threshold) | M.mask(g.n), threshold


def pruned_edge_set(g: WeightedBipartiteGraph, M: Matching, *, validate: bool = True) -> PrunedEdgeSet:
    """M together with every edge strictly lighter than M's heaviest edge."""
    check_matching(g, M)
    if M.cardinality == 0:
        raise EmptyMatchingException("A pruned edge set needs a non-empty matching")
    if validate:
        check_maximum(g, M)
    mask, threshold = pruned_mask(g, M)
    return PrunedEdgeSet(mask=mask, threshold=threshold)


def has_augmenting_path(g: WeightedBipartiteGraph, M: Matching, edge_filter: EdgeFilter = None) -> bool:
    """Berge: an augmenting path exists inside the filter iff M is not maximum there."""
    check_matching(g, M, edge_filter)
    return mcm_oracle(g, edge_filter).cardinality > M.cardinality


def alternating_reach(
    g: WeightedBipartiteGraph,
    M: Matching,
    roots: Iterable[Vertex],
    *,
    matched_from: Side,
    edge_filter: EdgeFilter = None,
) -> tuple[dict[Vertex, Optional[Vertex]], dict[Vertex, int]]:
    """
    Breadth-first alternating reachability inside the filter. Vertices on the
    `matched_from` side leave through their matched edge, vertices on the other
    side through unmatched edges, so every discovered walk alternates relative to M.
    Returns parent links (None for roots) and levels.
    """
    mask = g.as_mask(edge_filter)
    owner = M.task_owner(g.n)
    parent: dict[Vertex, Optional[Vertex]] = {}
    level: dict[Vertex, int] = {}
    queue: deque[Vertex] = deque()
    for r in roots:
        g.check_vertex(r)
        if r not in level:
            parent[r] = None
            level[r] = 0
            queue.append(r)

    while queue:
        v = queue.popleft()
        if v.side is matched_from:
            if v.is_agent:
                t = M.task_of(v.index)
                nxt = [Vertex.task(t)] if t != FREE and mask[v.index, t] else []
            else:
                a = int(owner[v.index])
                nxt = [Vertex.agent(a)] if a != FREE and mask[a, v.index] else []
        elif v.is_agent:
            t_match = M.task_of(v.index)
            nxt = [Vertex.task(int(j)) for j in np.flatnonzero(mask[v.index]) if j != t_match]
        else:
            a_match = int(owner[v.index])
            nxt = [Vertex.agent(int(i)) for i in np.flatnonzero(mask[:, v.index]) if i != a_match]
        for u in nxt:
            if u not in level:
                parent[u] = v
                level[u] = level[v] + 1
                queue.append(u)
    return parent, level


def alternating_tree(
    g: WeightedBipartiteGraph,
    M: Matching,
    root: Vertex,
    *,
    matched_from: Side,
    edge_filter: EdgeFilter = None,
) -> AlternatingTree:
    parent, level = alternating_reach(g, M, [root], matched_from=matched_from, edge_filter=edge_filter)
    links = {v: p for v, p in parent.items() if p is not None}
    return AlternatingTree(root=root, parent=links, level=level)
