"""Prune service: iterated max-edge removal and augmenting-path repair."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import FREE, Matching
from bapcore.apps.graph.services.graph_service import check_maximum, max_edge_in_matching, pruned_mask
from bapcore.apps.pruner.models.trace import PruneRecord, PruneTrace
from bapcore.apps.search.models.search import SearchInput
from bapcore.apps.search.services.alternating_service import run_search
from bapcore.config import Strategy
from bapcore.exceptions import OverlappingMatchingsException, SearchInvariantException
from bapcore.logger import get_logger

logger = get_logger(__name__)


def prune_bap(
    g: WeightedBipartiteGraph,
    M0: Optional[Matching] = None,
    strategy: Strategy | str = Strategy.DFS_GREEDY,
    *,
    validate: bool = True,
) -> tuple[Matching, PruneTrace]:
    """
    Solve the bottleneck assignment problem on g starting from the MCM M0
    (index pairing when omitted). Each pass removes the heaviest matched edge,
    keeps the matching plus strictly lighter edges, and searches for an
    augmenting path from the freed task. The first failed search ends the loop
    and the matching from before that pass is returned.
    """
    strategy = Strategy.parse(strategy)
    M = M0 if M0 is not None else Matching.identity(g.m, g.n)
    if validate:
        check_maximum(g, M)
    log = logger.bind(m=g.m, n=g.n, strategy=strategy.value)

    initial_weight = M.bottleneck(g.weight)
    trace = PruneTrace(
        strategy=strategy,
        initial_matching=M,
        initial_weight=initial_weight if initial_weight is not None else float("-inf"),
    )
    if M.cardinality == 0:
        trace.final_matching = M
        return M, trace

    iteration = 0
    while True:
        iteration += 1
        e_bar, w_bar = max_edge_in_matching(g, M)
        mask, _ = pruned_mask(g, M)
        mask[e_bar.agent, e_bar.task] = False
        M_bar = M.without(e_bar)
        outcome = run_search(SearchInput(graph=g, removed_edge=e_bar, matching=M_bar, edges=mask), strategy)

        matching_weight = outcome.new_matching.bottleneck(g.weight) if outcome.found else w_bar
        record = PruneRecord(
            iteration=iteration,
            removed_agent=e_bar.agent,
            removed_task=e_bar.task,
            weight=w_bar,
            edges_left=int(mask.sum()),
            found=outcome.found,
            search_iters=outcome.iterations,
            explored_per_pass=list(outcome.explored_per_pass),
            path_length=outcome.path_length,
            matching_weight=matching_weight if matching_weight is not None else w_bar,
        )
        trace.records.append(record)
        log.debug(
            "Pruned edge",
            extra={"iteration": iteration, "edge": str(e_bar), "weight": w_bar, "found": outcome.found},
        )

        if not outcome.found:
            break
        if outcome.new_matching.cardinality != M.cardinality:
            raise SearchInvariantException("Search changed the matching cardinality")
        M = outcome.new_matching
        if iteration > g.edge_count:
            raise SearchInvariantException("pruneBAP exceeded one pass per edge")

    trace.final_matching = M
    trace.final_bottleneck = (e_bar, w_bar)
    log.info(
        "pruneBAP finished",
        extra={"iterations": trace.iterations, "bottleneck": w_bar, "edge": str(e_bar)},
    )
    return M, trace


def warm_start_from(parts: Sequence[Matching]) -> Matching:
    """Union of matchings over disjoint agents and tasks of one combined graph."""
    if not parts:
        raise OverlappingMatchingsException("No matchings to combine")
    m = parts[0].m
    combined = np.full(m, FREE, dtype=np.int64)
    seen_tasks: set[int] = set()
    for k, part in enumerate(parts):
        if part.m != m:
            raise OverlappingMatchingsException(f"Part {k + 1} covers {part.m} agents, expected {m}")
        for e in part.edges():
            if combined[e.agent] != FREE:
                raise OverlappingMatchingsException(f"Agent a{e.agent + 1} is matched in more than one part")
            if e.task in seen_tasks:
                raise OverlappingMatchingsException(f"Task b{e.task + 1} is matched in more than one part")
            combined[e.agent] = e.task
            seen_tasks.add(e.task)
    return Matching(combined)
