"""
Augmenting-path searches run by the agents themselves.

Every while-pass of the depth-first and breadth-first searches is one D-tick
flooding phase. Agents only read their own row (E_i, W_i, Ē_i) and what
arrives from neighbours; the replicated current task, task stack and frontier
are updated identically by every agent from the agreed records.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from bapcore.apps.graph.models.matching import FREE, Matching
from bapcore.apps.graph.models.vertex import Vertex
from bapcore.apps.graph.services.graph_service import augment
from bapcore.apps.network.models.agent_state import AgentLocalState
from bapcore.apps.network.models.comm_graph import CommGraph
from bapcore.apps.network.models.messages import CandidateRecord, MessageKind, ParentPairRecord
from bapcore.apps.network.models.metrics import RoundMetrics
from bapcore.apps.network.services.network_service import SynchronousNetwork, best_of, union_of
from bapcore.apps.search.models.search import SearchOutcome
from bapcore.apps.search.services.bfs_service import level_tree
from bapcore.apps.search.services.dfs_service import explored_tree
from bapcore.config import Strategy
from bapcore.exceptions import InvalidInputException, SearchInvariantException
from bapcore.logger import get_logger

logger = get_logger(__name__)


def _check_root(states: Sequence[AgentLocalState], root: int) -> None:
    n = states[0].task_count
    held = {s.matched_task for s in states if s.matched_task != FREE}
    free = sorted(set(range(n)) - held)
    if free != [root]:
        raise InvalidInputException(
            f"The root b{root + 1} must be the only free task, found {[j + 1 for j in free]}"
        )


def _matched(states: Sequence[AgentLocalState]) -> np.ndarray:
    return np.array([s.matched_task for s in states], dtype=np.int64)


def _walk_from_root(states: Sequence[AgentLocalState], root: int) -> list[Vertex]:
    """Follow the agents whose ν differs from their matched task, starting at the root."""
    by_parent = {s.parent_task: s for s in states if s.parent_task != s.matched_task}
    walk = [Vertex.task(root)]
    t = root
    while True:
        s = by_parent.get(t)
        if s is None:
            raise SearchInvariantException(f"No agent took task b{t + 1} on the augmenting path")
        walk.append(Vertex.agent(s.id))
        if s.matched_task == FREE:
            return walk
        t = s.matched_task
        walk.append(Vertex.task(t))


def _outcome(
    states: list[AgentLocalState],
    root: int,
    found: bool,
    iterations: int,
    explored_per_pass: list[int],
    tree,
) -> SearchOutcome:
    matching = Matching(_matched(states))
    explored = frozenset(s.id for s in states if s.explored)
    if not found:
        return SearchOutcome(
            new_matching=matching,
            found=False,
            path=(),
            iterations=iterations,
            explored_per_pass=tuple(explored_per_pass),
            explored=explored,
            tree=tree,
        )
    walk = _walk_from_root(states, root)
    new_matching = Matching([s.parent_task for s in states])
    if new_matching != augment(matching, walk):
        raise SearchInvariantException("Agents' ν assignment is not M ⊕ P")
    return SearchOutcome(
        new_matching=new_matching,
        found=True,
        path=tuple(walk),
        iterations=iterations,
        explored_per_pass=tuple(explored_per_pass),
        explored=explored,
        tree=tree,
    )


def _dfs(
    states: list[AgentLocalState], network: SynchronousNetwork, root: int, greedy: bool
) -> tuple[SearchOutcome, list[AgentLocalState]]:
    n = states[0].task_count
    states = [s.reset_search().with_changes(current_task=root) for s in states]
    merge = best_of(lambda r: r.key(by_index=not greedy))
    explored_per_pass: list[int] = []
    parent_task: dict[int, int] = {}
    iterations = 0
    found = False

    while True:
        iterations += 1
        t = states[0].current_task
        # candidate i sends i, m_i and w(i, m_i) for tie-breaking and the next step
        proposals = [
            CandidateRecord(MessageKind.EXPLORE, s.id, t, s.w(t), s.matched_task)
            if not s.explored and s.can_reach(t)
            else None
            for s in states
        ]
        active = int(any(p is not None for p in proposals))
        winner: Optional[CandidateRecord] = network.agree(proposals, merge, explored=active, payload_items=active)

        if winner is None:
            explored_per_pass.append(0)
            if t == root:
                break
            next_states = []
            for s in states:
                if s.matched_task == t:
                    s = s.with_changes(parent_task=s.matched_task)
                next_states.append(
                    s.with_changes(current_task=s.dfs_task_stack[-1], dfs_task_stack=s.dfs_task_stack[:-1])
                )
            states = next_states
            continue

        explored_per_pass.append(1)
        parent_task[winner.agent] = t
        states[winner.agent] = states[winner.agent].with_changes(explored=True, parent_task=t, reached_from=t)
        if winner.matched_task == FREE:
            found = True
            break
        states = [
            s.with_changes(current_task=winner.matched_task, dfs_task_stack=s.dfs_task_stack + (t,))
            for s in states
        ]

    if iterations > 2 * n - 1:
        raise SearchInvariantException(f"Depth-first search took {iterations} passes for {n} tasks")
    tree = explored_tree(root, parent_task, _matched(states))
    return _outcome(states, root, found, iterations, explored_per_pass, tree), states


def _bfs(
    states: list[AgentLocalState], network: SynchronousNetwork, root: int
) -> tuple[SearchOutcome, list[AgentLocalState]]:
    n = states[0].task_count
    states = [s.reset_search().with_changes(frontier=(root,)) for s in states]
    explored_per_pass: list[int] = []
    parent_task: dict[int, int] = {}
    iterations = 0
    found = False

    while True:
        iterations += 1
        frontier = states[0].frontier
        local: list[frozenset] = []
        for s in states:
            reachable = [j for j in frontier if s.can_reach(j)]
            if s.explored or not reachable:
                local.append(frozenset())
            else:
                local.append(frozenset({ParentPairRecord(reachable[0], s.id, s.matched_task)}))
        size = sum(len(x) for x in local)
        records: frozenset = network.agree(local, union_of, explored=size, payload_items=size)

        if not records:
            explored_per_pass.append(0)
            break
        explored_per_pass.append(len(records))
        ordered: list[ParentPairRecord] = sorted(records)
        own = {r.agent: r for r in ordered}
        parent_task.update({a: own[a].parent_task for a in sorted(own)})

        next_states = []
        for s in states:
            r = own.get(s.id)
            if r is not None:
                s = s.with_changes(
                    explored=True,
                    parent_task=r.parent_task,
                    reached_from=r.parent_task,
                    descendant_tasks=frozenset() if r.is_free else frozenset({r.matched_task}),
                )
            elif s.explored:
                descendants = set(s.descendant_tasks)
                for other in ordered:
                    if other.parent_task in descendants and not other.is_free:
                        descendants.add(other.matched_task)
                s = s.with_changes(descendant_tasks=frozenset(descendants))
            next_states.append(s)
        states = next_states

        free = [r for r in ordered if r.is_free]
        if free:
            a_f = free[0]
            states = [
                s
                if s.id == a_f.agent or (s.explored and a_f.parent_task in s.descendant_tasks)
                else s.with_changes(parent_task=s.matched_task)
                for s in states
            ]
            found = True
            break
        next_frontier = tuple(sorted(r.matched_task for r in ordered))
        states = [s.with_changes(frontier=next_frontier) for s in states]

    if not found:
        states = [s.with_changes(parent_task=s.matched_task) for s in states]
    if iterations > n:
        raise SearchInvariantException(f"Breadth-first search took {iterations} passes for {n} tasks")
    tree = level_tree(root, parent_task, _matched(states))
    return _outcome(states, root, found, iterations, explored_per_pass, tree), states


def search_states(
    states: Sequence[AgentLocalState],
    network: SynchronousNetwork,
    root: int,
    strategy: Strategy | str,
) -> tuple[SearchOutcome, list[AgentLocalState]]:
    """Run one search on the given network and return the agents' states at its end."""
    strategy = Strategy.parse(strategy)
    states = list(states)
    if len(states) != network.comm.agent_count:
        raise InvalidInputException(f"{len(states)} agents for a network of {network.comm.agent_count}")
    _check_root(states, root)
    if strategy is Strategy.BFS:
        outcome, states = _bfs(states, network, root)
    else:
        outcome, states = _dfs(states, network, root, greedy=strategy is Strategy.DFS_GREEDY)
    logger.debug(
        "Distributed search finished",
        extra={"strategy": strategy.value, "found": outcome.found, "iterations": outcome.iterations},
    )
    return outcome, states


def run_distributed_search(
    states: Sequence[AgentLocalState],
    comm: CommGraph,
    root: int,
    strategy: Strategy | str = Strategy.DFS_GREEDY,
) -> tuple[SearchOutcome, RoundMetrics]:
    network = SynchronousNetwork(comm)
    outcome, _ = search_states(states, network, root, strategy)
    return outcome, network.metrics
