"""pruneBAP executed by agents that each hold only their incident edges."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import FREE, Matching
from bapcore.apps.graph.models.vertex import Edge
from bapcore.apps.graph.services.graph_service import check_maximum
from bapcore.apps.network.models.agent_state import AgentLocalState
from bapcore.apps.network.models.comm_graph import CommGraph
from bapcore.apps.network.models.metrics import RoundMetrics
from bapcore.apps.network.services.consensus_service import max_consensus
from bapcore.apps.network.services.distributed_search_service import search_states
from bapcore.apps.network.services.network_service import SynchronousNetwork
from bapcore.apps.pruner.models.trace import PruneRecord, PruneTrace
from bapcore.config import Strategy
from bapcore.exceptions import ConsensusException, SearchInvariantException, TopologyException
from bapcore.logger import get_logger

logger = get_logger(__name__)


def make_agent_states(g: WeightedBipartiteGraph, M: Optional[Matching] = None) -> list[AgentLocalState]:
    """Hand agent i its own row of the graph and its matched task."""
    M = M if M is not None else Matching.identity(g.m, g.n)
    return [
        AgentLocalState(
            id=i,
            incident_edges=g.present[i].copy(),
            weights=g.weight[i].copy(),
            matched_task=M.task_of(i),
            parent_task=M.task_of(i),
        )
        for i in range(g.m)
    ]


def distributed_prune(states: Sequence[AgentLocalState], e_bar: Edge, w_bar: float) -> list[AgentLocalState]:
    """
    Each agent keeps its matched edge and its incident edges lighter than w(ē).
    The owner of ē drops it and becomes free. Applying it twice changes nothing.
    """
    out = []
    for s in states:
        owner = s.id == e_bar.agent
        matched = FREE if owner and s.matched_task == e_bar.task else s.matched_task
        local = s.incident_edges & (s.weights < w_bar)
        if matched != FREE:
            local[matched] = True
        if owner:
            local[e_bar.task] = False
        out.append(s.with_changes(matched_task=matched, parent_task=matched, pruned_local=local))
    return out


def _matching(states: Sequence[AgentLocalState]) -> Matching:
    return Matching([s.matched_task for s in states])


def run_distributed_prune_bap(
    g: WeightedBipartiteGraph,
    comm: CommGraph,
    M0: Optional[Matching] = None,
    strategy: Strategy | str = Strategy.DFS_GREEDY,
    *,
    validate: bool = True,
) -> tuple[Matching, PruneTrace, RoundMetrics]:
    """
    Each pass: max-consensus on the matched edges (D ticks), local pruning, then
    the chosen search with D ticks per while-pass. Produces the same trace as the
    centralized prune_bap.
    """
    strategy = Strategy.parse(strategy)
    if comm.agent_count != g.m:
        raise TopologyException(f"Communication graph has {comm.agent_count} agents, instance has {g.m}")
    M = M0 if M0 is not None else Matching.identity(g.m, g.n)
    if validate:
        check_maximum(g, M)
    log = logger.bind(m=g.m, n=g.n, strategy=strategy.value, D=comm.diameter)

    network = SynchronousNetwork(comm)
    states = make_agent_states(g, M)
    initial_weight = M.bottleneck(g.weight)
    trace = PruneTrace(
        strategy=strategy,
        initial_matching=M,
        initial_weight=initial_weight if initial_weight is not None else float("-inf"),
    )
    if M.cardinality == 0:
        trace.final_matching = M
        return M, trace, network.metrics

    iteration = 0
    while True:
        iteration += 1
        agreed = max_consensus(states, comm, network=network)
        if agreed is None:
            raise ConsensusException("No agent proposed a matched edge")
        e_bar, w_bar = agreed
        states = distributed_prune(states, e_bar, w_bar)
        edges_left = int(sum(int(np.count_nonzero(s.pruned_local)) for s in states))
        outcome, states = search_states(states, network, e_bar.task, strategy)

        matching_weight = outcome.new_matching.bottleneck(g.weight) if outcome.found else w_bar
        trace.records.append(
            PruneRecord(
                iteration=iteration,
                removed_agent=e_bar.agent,
                removed_task=e_bar.task,
                weight=w_bar,
                edges_left=edges_left,
                found=outcome.found,
                search_iters=outcome.iterations,
                explored_per_pass=list(outcome.explored_per_pass),
                path_length=outcome.path_length,
                matching_weight=matching_weight if matching_weight is not None else w_bar,
            )
        )
        log.debug(
            "Pruned edge",
            extra={"iteration": iteration, "edge": str(e_bar), "weight": w_bar, "found": outcome.found},
        )

        if not outcome.found:
            # the owner of ē takes its task back
            states = [
                s.with_changes(matched_task=e_bar.task, parent_task=e_bar.task) if s.id == e_bar.agent else s
                for s in states
            ]
            break
        states = [s.with_changes(matched_task=s.parent_task) for s in states]
        if iteration > g.edge_count:
            raise SearchInvariantException("pruneBAP exceeded one pass per edge")

    final = _matching(states)
    if final.cardinality != M.cardinality:
        raise SearchInvariantException("Distributed run changed the matching cardinality")
    trace.final_matching = final
    trace.final_bottleneck = (e_bar, w_bar)
    log.info(
        "Distributed pruneBAP finished",
        extra={
            "iterations": trace.iterations,
            "bottleneck": w_bar,
            "time_steps": network.metrics.time_steps,
            "messages": network.metrics.messages_sent,
        },
    )
    return final, trace, network.metrics
