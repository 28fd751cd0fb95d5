"""Sequential lightest-edge assignment by repeated min-consensus."""

from __future__ import annotations

from typing import Optional

import numpy as np

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import FREE, Matching
from bapcore.apps.greedy.models.greedy import GreedyOutcome
from bapcore.apps.network.models.comm_graph import CommGraph
from bapcore.apps.network.services.consensus_service import min_consensus
from bapcore.apps.network.services.distributed_prune_service import make_agent_states
from bapcore.apps.network.services.network_service import SynchronousNetwork
from bapcore.exceptions import InvalidGraphException, TopologyException
from bapcore.logger import get_logger

logger = get_logger(__name__)


def greedy_assign(g: WeightedBipartiteGraph, comm: Optional[CommGraph] = None) -> GreedyOutcome:
    """
    n rounds; in each one every unassigned agent proposes its lightest edge to
    an unassigned task and the network agrees on the lightest proposal, which
    is committed. Stops early when no agent can propose.
    """
    if g.m < g.n:
        raise InvalidGraphException(f"Greedy assignment needs m >= n, got m={g.m}, n={g.n}")
    comm = comm if comm is not None else CommGraph.complete(g.m)
    if comm.agent_count != g.m:
        raise TopologyException(f"Communication graph has {comm.agent_count} agents, instance has {g.m}")

    network = SynchronousNetwork(comm)
    states = make_agent_states(g, Matching.empty(g.m))
    assigned = np.full(g.m, FREE, dtype=np.int64)
    open_tasks = np.ones(g.n, dtype=bool)
    committed = []
    rounds = 0

    for _ in range(g.n):
        candidates = [s.lightest_edge(open_tasks) if assigned[s.id] == FREE else None for s in states]
        rounds += 1
        agreed = min_consensus(states, comm, candidates, network=network)
        if agreed is None:
            break
        edge, weight = agreed
        assigned[edge.agent] = edge.task
        open_tasks[edge.task] = False
        committed.append((edge, weight))

    matching = Matching(assigned)
    largest = max((w for _, w in committed), default=None)
    logger.debug("Greedy assignment", extra={"rounds": rounds, "largest_weight": largest})
    return GreedyOutcome(
        matching=matching,
        largest_weight=largest,
        time_steps=network.metrics.time_steps,
        rounds=rounds,
        committed=tuple(committed),
        metrics=network.metrics,
    )
