from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field


class Decision(str, Enum):
    REUSE_UNION = "reuse_union"
    WARM_START_REQUIRED = "warm_start_required"


class MergeReport(BaseModel):
    """
    Outcome of the merge test. Edges are (agent, task) pairs in zero-based
    indices of the combined graph; witness_path holds vertex labels.
    """

    bound: float
    w_e1: float
    w_e2: Optional[float] = None
    e1: Tuple[int, int]
    e2: Optional[Tuple[int, int]] = None
    swapped: bool = False

    cond_i: bool = False
    cond_ii: bool = False
    cond_iii: bool = False
    witness_edges: List[Tuple[int, int]] = Field(default_factory=list)
    witness_path: List[str] = Field(default_factory=list)

    g1_cluster: bool = False
    g2_cluster: bool = False
    g2_has_free_agents: bool = False
    hypotheses_hold: bool = False
    decision: Decision = Decision.REUSE_UNION
    notes: List[str] = Field(default_factory=list)

    @property
    def all_conditions(self) -> bool:
        return self.cond_i and self.cond_ii and self.cond_iii
