"""CSV row schemas of the experiment outputs."""

from typing import List, Optional

from pydantic import BaseModel


class CsvRow(BaseModel):
    def csv_row(self) -> list:
        row = []
        for name in type(self).model_fields:
            value = getattr(self, name)
            if value is None:
                row.append("")
            elif isinstance(value, bool):
                row.append(int(value))
            elif hasattr(value, "value"):
                row.append(value.value)
            else:
                row.append(value)
        return row

    @classmethod
    def columns(cls) -> List[str]:
        return list(cls.model_fields)

    def sort_key(self) -> tuple:
        return ()


class ExperimentRow(CsvRow):
    """complexity, convergence, message and optimgap runs."""

    n: int
    m: int
    trial: int
    strategy: str
    prune_iterations: int
    search_iterations: int
    time_steps: int
    messages_sent: int
    max_explored_per_round: int
    mean_explored_per_round: float
    max_payload_items: int
    bottleneck_weight: float
    greedy_weight: float
    gap: float
    greedy_time_steps: int
    steps_to_beat_greedy: Optional[int] = None

    def sort_key(self) -> tuple:
        return (self.n, self.trial, self.strategy)


class KstarRow(CsvRow):
    """Running matching weight against elapsed time steps."""

    n: int
    m: int
    trial: int
    strategy: str
    iteration: int
    time_step: int
    weight: float
    greedy_weight: float
    greedy_time_steps: int

    def sort_key(self) -> tuple:
        return (self.n, self.trial, self.strategy, self.iteration)


class MergeRow(CsvRow):
    n: int
    m: int
    trial: int
    strategy: str
    decision: str
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    hypotheses_hold: bool
    bound: float
    union_weight: float
    merged_weight: float
    # cold pruneBAP on the combined graph
    optimal_weight: float
    warm_iterations: int
    cold_iterations: int
    sub_time_steps: int

    def sort_key(self) -> tuple:
        return (self.n, self.trial, self.strategy)
