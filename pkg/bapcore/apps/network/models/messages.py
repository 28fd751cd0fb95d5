"""Tagged records flooded between agents."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from bapcore.apps.graph.models.matching import FREE
from bapcore.apps.graph.models.vertex import Edge


class MessageKind(str, Enum):
    MAX_CANDIDATE = "max_candidate"
    MIN_CANDIDATE = "min_candidate"
    EXPLORE = "explore"
    PARENT_PAIR = "parent_pair"


@dataclass(frozen=True)
class CandidateRecord:
    """
    An agent's proposal in a consensus phase. For explore records task is the
    task the agent would be reached from and matched_task is what it holds.
    """

    kind: MessageKind
    agent: int
    task: int
    weight: float
    matched_task: int = FREE

    @property
    def edge(self) -> Edge:
        return Edge(self.agent, self.task)

    def key(self, by_index: bool = False) -> tuple:
        """Smaller key wins; ties always fall to the lower agent index."""
        if by_index:
            return (self.agent,)
        if self.kind is MessageKind.MAX_CANDIDATE:
            return (-self.weight, self.agent, self.task)
        return (self.weight, self.agent, self.task)


@dataclass(frozen=True, order=True)
class ParentPairRecord:
    """(ν_i, m_i) announced by an agent that joins the next tree level."""

    parent_task: int
    agent: int
    matched_task: int

    @property
    def is_free(self) -> bool:
        return self.matched_task == FREE
