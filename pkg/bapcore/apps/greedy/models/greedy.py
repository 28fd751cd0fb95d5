from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from bapcore.apps.graph.models.matching import Matching
from bapcore.apps.graph.models.vertex import Edge
from bapcore.apps.network.models.metrics import RoundMetrics


@dataclass(frozen=True)
class GreedyOutcome:
    """Assignment built by committing the globally lightest free edge once per consensus round."""

    matching: Matching
    largest_weight: Optional[float]
    time_steps: int
    rounds: int
    committed: tuple[tuple[Edge, float], ...] = ()
    metrics: Optional[RoundMetrics] = field(default=None, compare=False)

    def gap(self, bottleneck: float) -> float:
        """Optimality gap g - h against a bottleneck weight h."""
        if self.largest_weight is None:
            return 0.0
        return self.largest_weight - bottleneck
