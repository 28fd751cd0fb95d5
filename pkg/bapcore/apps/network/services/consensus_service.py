"""Max- and min-consensus by D-tick flooding."""

from __future__ import annotations

from typing import Optional, Sequence

from bapcore.apps.graph.models.vertex import Edge
from bapcore.apps.network.models.agent_state import AgentLocalState
from bapcore.apps.network.models.comm_graph import CommGraph
from bapcore.apps.network.models.messages import CandidateRecord, MessageKind
from bapcore.apps.network.services.network_service import SynchronousNetwork, best_of

Candidate = Optional[tuple[Edge, float]]


def _records(candidates: Sequence[Candidate], kind: MessageKind) -> list[Optional[CandidateRecord]]:
    return [
        None if c is None else CandidateRecord(kind=kind, agent=c[0].agent, task=c[0].task, weight=float(c[1]))
        for c in candidates
    ]


def _agree(
    candidates: Sequence[Candidate],
    comm: CommGraph,
    kind: MessageKind,
    network: Optional[SynchronousNetwork],
) -> Optional[tuple[Edge, float]]:
    network = network or SynchronousNetwork(comm)
    records = _records(candidates, kind)
    winner = network.agree(records, best_of(lambda r: r.key()), payload_items=1)
    return None if winner is None else (winner.edge, winner.weight)


def max_consensus(
    states: Sequence[AgentLocalState],
    comm: CommGraph,
    candidates: Optional[Sequence[Candidate]] = None,
    *,
    network: Optional[SynchronousNetwork] = None,
) -> Optional[tuple[Edge, float]]:
    """
    Global heaviest proposal after D ticks; ties go to the lower agent index.
    Each agent proposes its matched edge unless candidates are given.
    Returns None when nobody proposes anything.
    """
    if candidates is None:
        candidates = [s.matched_edge() for s in states]
    return _agree(candidates, comm, MessageKind.MAX_CANDIDATE, network)


def min_consensus(
    states: Sequence[AgentLocalState],
    comm: CommGraph,
    candidates: Optional[Sequence[Candidate]] = None,
    *,
    network: Optional[SynchronousNetwork] = None,
) -> Optional[tuple[Edge, float]]:
    """As max_consensus with the lightest proposal; agents default to their lightest incident edge."""
    if candidates is None:
        candidates = [s.lightest_edge() for s in states]
    return _agree(candidates, comm, MessageKind.MIN_CANDIDATE, network)


def consensus_rounds(
    candidates: Sequence[Candidate],
    comm: CommGraph,
    ticks: int,
    *,
    maximize: bool = True,
) -> list[Candidate]:
    """What every agent believes after a given number of ticks; unchecked, no metrics."""
    kind = MessageKind.MAX_CANDIDATE if maximize else MessageKind.MIN_CANDIDATE
    beliefs = SynchronousNetwork(comm).run_ticks(_records(candidates, kind), best_of(lambda r: r.key()), ticks)
    return [None if b is None else (b.edge, b.weight) for b in beliefs]
