"""Vertices and edges of a bipartite assignment graph."""

from dataclasses import dataclass
from enum import Enum


class Side(str, Enum):
    AGENT = "a"
    TASK = "b"

    @property
    def other(self) -> "Side":
        return Side.TASK if self is Side.AGENT else Side.AGENT


@dataclass(frozen=True, order=True)
class Vertex:
    """An agent or a task, identified by side and zero-based index."""

    side: Side
    index: int

    @classmethod
    def agent(cls, index: int) -> "Vertex":
        return cls(Side.AGENT, int(index))

    @classmethod
    def task(cls, index: int) -> "Vertex":
        return cls(Side.TASK, int(index))

    @property
    def is_agent(self) -> bool:
        return self.side is Side.AGENT

    def __str__(self) -> str:
        return f"{self.side.value}{self.index + 1}"


@dataclass(frozen=True, order=True)
class Edge:
    """An undirected agent-task edge."""

    agent: int
    task: int

    @classmethod
    def between(cls, u: Vertex, v: Vertex) -> "Edge":
        if u.side is v.side:
            raise ValueError(f"{u} and {v} are on the same side")
        agent, task = (u, v) if u.is_agent else (v, u)
        return cls(agent.index, task.index)

    @property
    def agent_vertex(self) -> Vertex:
        return Vertex.agent(self.agent)

    @property
    def task_vertex(self) -> Vertex:
        return Vertex.task(self.task)

    def other(self, v: Vertex) -> Vertex:
        if v == self.agent_vertex:
            return self.task_vertex
        if v == self.task_vertex:
            return self.agent_vertex
        raise ValueError(f"{v} is not an endpoint of {self}")

    def __str__(self) -> str:
        return f"{{a{self.agent + 1},b{self.task + 1}}}"
