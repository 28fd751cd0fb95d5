"""Instance and matching file schemas."""

from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy.spatial.distance import cdist

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import Matching


class Positions(BaseModel):
    agents: List[List[float]]
    tasks: List[List[float]]


class InstanceFile(BaseModel):
    """
    {"m", "n", "weights", "mask", "positions", "split"}; weights and mask are
    agent-major. Weights are Euclidean distances between positions when absent.
    """

    m: int = Field(ge=1)
    n: int = Field(ge=1)
    weights: Optional[List[List[float]]] = None
    mask: Optional[List[List[bool]]] = None
    positions: Optional[Positions] = None
    # (m1, n1) of a two-part instance
    split: Optional[List[int]] = None

    @model_validator(mode="after")
    def check_shapes(self) -> "InstanceFile":
        if self.weights is None and self.positions is None:
            raise ValueError("either weights or positions is required")
        for name, rows in (("weights", self.weights), ("mask", self.mask)):
            if rows is None:
                continue
            if len(rows) != self.m or any(len(row) != self.n for row in rows):
                raise ValueError(f"{name} must be {self.m} rows of {self.n} entries")
        if self.positions is not None:
            if len(self.positions.agents) != self.m or len(self.positions.tasks) != self.n:
                raise ValueError("positions must list m agents and n tasks")
        if self.split is not None:
            if len(self.split) != 2 or not (1 <= self.split[0] <= self.m and 1 <= self.split[1] <= self.n):
                raise ValueError("split must be [m1, n1] within the instance")
        return self

    def to_graph(self) -> WeightedBipartiteGraph:
        positions = None
        if self.positions is not None:
            positions = (
                np.asarray(self.positions.agents, dtype=np.float64),
                np.asarray(self.positions.tasks, dtype=np.float64),
            )
        if self.weights is not None:
            weight = np.asarray(self.weights, dtype=np.float64)
        else:
            weight = cdist(positions[0], positions[1])
        return WeightedBipartiteGraph(weight, self.mask, positions=positions)

    @classmethod
    def from_graph(cls, g: WeightedBipartiteGraph, split: Optional[List[int]] = None) -> "InstanceFile":
        positions = None
        if g.positions is not None:
            positions = Positions(agents=g.positions[0].tolist(), tasks=g.positions[1].tolist())
        return cls(
            m=g.m,
            n=g.n,
            weights=g.weight.tolist(),
            mask=None if g.is_complete else g.present.tolist(),
            positions=positions,
            split=split,
        )


class MatchingFile(BaseModel):
    """{"matched_task": [...]} with -1 for free agents."""

    matched_task: List[int]

    def to_matching(self) -> Matching:
        return Matching(self.matched_task)

    @classmethod
    def from_matching(cls, M: Matching) -> "MatchingFile":
        return cls(matched_task=M.to_list())
