"""Deciding whether two solved sub-assignments can simply be joined."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import Matching
from bapcore.apps.graph.models.vertex import Edge, Side, Vertex
from bapcore.apps.graph.services.graph_service import alternating_reach, pruned_mask
from bapcore.apps.graph.services.oracle_service import brute_force_bottleneck, mcm_oracle
from bapcore.apps.merge.models.partition import Partition
from bapcore.apps.merge.schemas.report import Decision, MergeReport
from bapcore.apps.merge.services.cluster_service import is_bottleneck_cluster, is_critical_bottleneck_edge
from bapcore.apps.pruner.models.trace import PruneTrace
from bapcore.apps.pruner.services.prune_service import prune_bap
from bapcore.config import Strategy, settings
from bapcore.exceptions import PreconditionException
from bapcore.logger import get_logger

logger = get_logger(__name__)


def bottleneck_bound(p: Partition) -> float:
    """max{w(e_1), w(e_2)}: the joined matching is an assignment of G_3 with this weight."""
    _, w1 = p.e1
    if p.e2 is None:
        return w1
    return max(w1, p.e2[1])


def _ordered(p: Partition) -> tuple[Partition, bool]:
    if p.e2 is not None and p.e2[1] > p.e1[1]:
        return p.swapped(), True
    return p, False


def _verify_side(g: WeightedBipartiteGraph, M: Matching, e: Edge, side: int) -> None:
    if not is_critical_bottleneck_edge(g, M, e):
        raise PreconditionException(f"{e} is not a critical bottleneck edge of side {side}")
    if g.n <= settings.MAX_ORACLE_TASKS:
        _, optimum = brute_force_bottleneck(g)
        if M.bottleneck(g.weight) != optimum:
            raise PreconditionException(f"Matching of side {side} is not a bottleneck assignment")


def _agent_reach_below(
    g2: WeightedBipartiteGraph, M2: Matching, start: int, threshold: float
) -> dict[Vertex, Optional[Vertex]]:
    """Alternating walks in G_2 that leave agents by their matched edge and tasks by lighter unmatched edges."""
    # matched edges stay usable at any weight; M_2 may itself reach w(e_1) when the bottlenecks tie
    usable = g2.below(threshold) | M2.mask(g2.n)
    parent, _ = alternating_reach(g2, M2, [Vertex.agent(start)], matched_from=Side.AGENT, edge_filter=usable)
    return parent


def _walk(parent: dict[Vertex, Optional[Vertex]], end: Vertex) -> list[Vertex]:
    walk = [end]
    while parent[walk[-1]] is not None:
        walk.append(parent[walk[-1]])
    return list(reversed(walk))


def check_merge_conditions(p: Partition, verify: bool = False) -> MergeReport:
    """
    Orders the sides so that w(e_1) >= w(e_2), then tests whether some lighter
    cross edge reaches the task side of G_1's critical structure (i), whether
    some lighter cross edge reaches its agent side (ii) and whether G_2 has an
    alternating path below w(e_1) joining the two (iii).
    """
    p.validate()
    bound = bottleneck_bound(p)
    if p.is_single:
        e1, w1 = p.e1
        return MergeReport(
            bound=bound,
            w_e1=w1,
            e1=(p.to_global(1, e1).agent, p.to_global(1, e1).task),
            g1_cluster=is_bottleneck_cluster(p.g1, p.matching1, e1),
            decision=Decision.REUSE_UNION,
            notes=["second side is empty"],
        )

    q, swapped = _ordered(p)
    g1, g2, M1, M2 = q.g1, q.g2, q.matching1, q.matching2
    (e1, w1), (e2, w2) = q.e1, q.e2
    if verify:
        _verify_side(g1, M1, e1, 1)
        _verify_side(g2, M2, e2, 2)
    log = logger.bind(w_e1=w1, w_e2=w2, swapped=swapped)

    # reachable sides of G_1 once e_1 is gone
    mask1, _ = pruned_mask(g1, M1)
    mask1[e1.agent, e1.task] = False
    task_side, _ = alternating_reach(g1, M1, [e1.task_vertex], matched_from=Side.AGENT, edge_filter=mask1)
    free_roots = [e1.agent_vertex] + [Vertex.agent(a) for a in M1.free_agents() if a != e1.agent]
    agent_side, _ = alternating_reach(g1, M1, free_roots, matched_from=Side.TASK, edge_filter=mask1)
    nu_tasks = np.array(sorted(q.tasks1[v.index] for v in task_side if not v.is_agent), dtype=int)
    mu_agents = np.array(sorted(q.agents1[v.index] for v in agent_side if v.is_agent), dtype=int)

    G3 = q.graph
    light = G3.below(w1)
    rows2 = np.asarray(q.agents2, dtype=int)
    cols2 = np.asarray(q.tasks2, dtype=int)
    # cross edges lighter than w(e_1), indexed [G_2 agent, T_ν task] and [T_μ agent, G_2 task]
    to_task_side = light[np.ix_(rows2, nu_tasks)] if nu_tasks.size else np.zeros((rows2.size, 0), dtype=bool)
    to_agent_side = light[np.ix_(mu_agents, cols2)] if mu_agents.size else np.zeros((0, cols2.size), dtype=bool)
    I = [int(k) for k in np.flatnonzero(to_task_side.any(axis=1))]
    J = {int(k) for k in np.flatnonzero(to_agent_side.any(axis=0))}
    cond_i, cond_ii = bool(I), bool(J)

    witness_edges: list[tuple[int, int]] = []
    witness_path: list[str] = []
    cond_iii = False
    for i in I:
        parent = _agent_reach_below(g2, M2, i, w1)
        hits = sorted(v.index for v in parent if not v.is_agent and v.index in J)
        if not hits:
            continue
        j = hits[0]
        cond_iii = True
        b_prime = int(nu_tasks[int(np.argmax(to_task_side[i]))])
        a_prime = int(mu_agents[int(np.argmax(to_agent_side[:, j]))])
        inner = _walk(parent, Vertex.task(j))
        glob = [
            Vertex.agent(q.agents2[v.index]) if v.is_agent else Vertex.task(q.tasks2[v.index]) for v in inner
        ]
        witness_edges = [(q.agents2[i], b_prime), (a_prime, q.tasks2[j])]
        witness_path = [str(v) for v in [Vertex.task(b_prime), *glob, Vertex.agent(a_prime)]]
        break
    if not cond_iii:
        if cond_i:
            i = I[0]
            witness_edges.append((q.agents2[i], int(nu_tasks[int(np.argmax(to_task_side[i]))])))
        if cond_ii:
            j = min(J)
            witness_edges.append((int(mu_agents[int(np.argmax(to_agent_side[:, j]))]), q.tasks2[j]))

    g1_cluster = is_bottleneck_cluster(g1, M1, e1)
    g2_cluster = is_bottleneck_cluster(g2, M2, e2)
    g2_free = bool(M2.free_agents())
    unique_max = int(np.count_nonzero(M1.weights(g1.weight) == w1)) == 1
    square = g1.m == g1.n and g2.m == g2.n
    hypotheses_hold = w1 > w2 and unique_max and g1_cluster and g2_cluster and square

    notes: list[str] = []
    if not cond_i:
        decision = Decision.REUSE_UNION
    elif not g2_free and not cond_ii:
        decision = Decision.REUSE_UNION
    elif not g2_free and not cond_iii and hypotheses_hold:
        decision = Decision.REUSE_UNION
    else:
        decision = Decision.WARM_START_REQUIRED
    if decision is Decision.WARM_START_REQUIRED and not hypotheses_hold:
        notes.append("conditions hold but the strict hypotheses do not; warm start chosen conservatively")

    e1_global, e2_global = q.to_global(1, e1), q.to_global(2, e2)
    report = MergeReport(
        bound=bound,
        w_e1=w1,
        w_e2=w2,
        e1=(e1_global.agent, e1_global.task),
        e2=(e2_global.agent, e2_global.task),
        swapped=swapped,
        cond_i=cond_i,
        cond_ii=cond_ii,
        cond_iii=cond_iii,
        witness_edges=witness_edges,
        witness_path=witness_path,
        g1_cluster=g1_cluster,
        g2_cluster=g2_cluster,
        g2_has_free_agents=g2_free,
        hypotheses_hold=hypotheses_hold,
        decision=decision,
        notes=notes,
    )
    log.info(
        "Merge conditions evaluated",
        extra={"cond_i": cond_i, "cond_ii": cond_ii, "cond_iii": cond_iii, "decision": decision.value},
    )
    return report


def merge_or_warmstart(
    p: Partition,
    strategy: Strategy | str = Strategy.DFS_GREEDY,
    *,
    verify: bool = False,
) -> tuple[Matching, MergeReport, Optional[PruneTrace]]:
    """Join M_1 and M_2, running pruneBAP from the joined matching only when the test requires it."""
    report = check_merge_conditions(p, verify=verify)
    union = p.union_matching()
    if report.decision is Decision.REUSE_UNION:
        return union, report, None
    merged, trace = prune_bap(p.graph, union, strategy)
    return merged, report, trace


def _solve(g: WeightedBipartiteGraph, strategy: Strategy) -> Matching:
    M, _ = prune_bap(g, mcm_oracle(g), strategy)
    return M


def solve_partition(
    graph: WeightedBipartiteGraph,
    m1: int,
    n1: int,
    strategy: Strategy | str = Strategy.DFS_GREEDY,
    *,
    parallel: bool = False,
) -> Partition:
    """Split off the first m1 agents and n1 tasks and solve both sides independently."""
    strategy = Strategy.parse(strategy)
    if not (1 <= m1 <= graph.m and 1 <= n1 <= graph.n):
        raise PreconditionException(f"Split ({m1}, {n1}) does not fit a {graph.m}x{graph.n} graph")
    skeleton = Partition.from_split(graph, m1, n1, Matching.empty(m1))
    subgraphs = [skeleton.g1] if skeleton.g2 is None else [skeleton.g1, skeleton.g2]
    if parallel and len(subgraphs) > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            solved = list(pool.map(lambda g: _solve(g, strategy), subgraphs))
    else:
        solved = [_solve(g, strategy) for g in subgraphs]
    p = Partition.from_split(graph, m1, n1, solved[0], solved[1] if len(solved) > 1 else None)
    p.validate()
    return p
