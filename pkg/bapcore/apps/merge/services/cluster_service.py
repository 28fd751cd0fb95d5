"""Critical bottleneck edges, bottleneck clusters and their agent and task trees."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import Matching
from bapcore.apps.graph.models.tree import AlternatingTree
from bapcore.apps.graph.models.vertex import Edge, Side
from bapcore.apps.graph.services.graph_service import (
    alternating_reach,
    alternating_tree,
    check_matching,
    has_augmenting_path,
    max_edge_in_matching,
    pruned_mask,
)
from bapcore.exceptions import InvalidMatchingException, PreconditionException


def _require_matched(M: Matching, e: Edge) -> None:
    if not M.contains(e):
        raise InvalidMatchingException(f"Edge {e} is not in the matching")


def is_critical_bottleneck_edge(g: WeightedBipartiteGraph, M: Matching, e: Edge) -> bool:
    """e is M's heaviest edge and the pruned set without e has no augmenting path for M minus e."""
    check_matching(g, M)
    _require_matched(M, e)
    heaviest, _ = max_edge_in_matching(g, M)
    if heaviest != e:
        return False
    mask, _ = pruned_mask(g, M)
    mask[e.agent, e.task] = False
    return not has_augmenting_path(g, M.without(e), mask)


def is_bottleneck_cluster(g: WeightedBipartiteGraph, M: Matching, e: Edge) -> bool:
    """Every vertex lies on an alternating path inside the pruned set that ends at an endpoint of e."""
    check_matching(g, M)
    _require_matched(M, e)
    mask, _ = pruned_mask(g, M)
    from_agent, _ = alternating_reach(g, M, [e.agent_vertex], matched_from=Side.TASK, edge_filter=mask)
    from_task, _ = alternating_reach(g, M, [e.task_vertex], matched_from=Side.AGENT, edge_filter=mask)
    covered = set(from_agent) | set(from_task)
    return all(v in covered for v in g.vertices())


def _induced(mask: np.ndarray, tree: AlternatingTree) -> frozenset[Edge]:
    return frozenset(Edge(a, t) for a in tree.agents for t in tree.tasks if mask[a, t])


def agent_task_trees(g: WeightedBipartiteGraph, M: Matching, e_c: Edge) -> tuple[AlternatingTree, AlternatingTree]:
    """
    The agent tree rooted at a_c and the task tree rooted at b_c inside the pruned
    set without e_c. Each tree carries the pruned edges induced on its vertices.
    """
    check_matching(g, M)
    _require_matched(M, e_c)
    mask, _ = pruned_mask(g, M)
    mask[e_c.agent, e_c.task] = False

    agent_tree = alternating_tree(g, M, e_c.agent_vertex, matched_from=Side.TASK, edge_filter=mask)
    task_tree = alternating_tree(g, M, e_c.task_vertex, matched_from=Side.AGENT, edge_filter=mask)
    shared = agent_tree.vertices & task_tree.vertices
    if shared:
        raise PreconditionException(
            f"Agent and task trees share {sorted(str(v) for v in shared)}; {e_c} is not a critical bottleneck edge"
        )
    missing = set(g.vertices()) - agent_tree.vertices - task_tree.vertices
    if missing:
        raise PreconditionException(
            f"{sorted(str(v) for v in missing)} lie in neither tree; the graph is not a bottleneck cluster"
        )
    agent_tree = replace(agent_tree, edges=_induced(mask, agent_tree))
    task_tree = replace(task_tree, edges=_induced(mask, task_tree))
    return agent_tree, task_tree


def detached_edges(
    g: WeightedBipartiteGraph, M: Matching, e_c: Edge, trees: tuple[AlternatingTree, AlternatingTree]
) -> frozenset[Edge]:
    """Pruned edges from a task-tree agent to an agent-tree task; they lie on no path from either root."""
    agent_tree, task_tree = trees
    mask, _ = pruned_mask(g, M)
    return frozenset(Edge(a, t) for a in task_tree.agents for t in agent_tree.tasks if mask[a, t])
