from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from bapcore.config import Distribution, ExperimentName, Strategy, settings


class ExperimentConfig(BaseModel):
    """One sweep over n, trials and strategies; seed fixes every random draw."""

    name: ExperimentName
    n_values: List[int] = Field(min_length=1)
    # agents per instance; equal to n when unset
    m: Optional[int] = Field(default=None, ge=1)
    trials: int = Field(default=settings.DEFAULT_TRIALS, ge=1)
    seed: int = settings.DEFAULT_SEED
    topology: str = settings.DEFAULT_TOPOLOGY
    strategies: List[Strategy] = Field(default_factory=list)
    distribution: Optional[Distribution] = None
    out: Path
    workers: int = Field(default=settings.WORKERS, ge=1)
    simulate: bool = False

    @model_validator(mode="after")
    def apply_defaults(self) -> "ExperimentConfig":
        if any(n < 1 for n in self.n_values):
            raise ValueError("every n must be at least 1")
        if self.m is not None and self.m < max(self.n_values):
            raise ValueError(f"m={self.m} is smaller than n={max(self.n_values)}")
        if self.name is ExperimentName.MERGE and min(self.n_values) < 2:
            raise ValueError("merge experiments need n >= 2")
        if not self.strategies:
            if self.name is ExperimentName.OPTIMGAP:
                self.strategies = [Strategy.DFS_GREEDY]
            else:
                self.strategies = [Strategy.DFS_GREEDY, Strategy.BFS]
        if self.distribution is None:
            self.distribution = (
                Distribution.TWO_CLUSTERS if self.name is ExperimentName.MERGE else Distribution.UNIFORM_SQUARE
            )
        return self

    def agents_for(self, n: int) -> int:
        return self.m if self.m is not None else n
