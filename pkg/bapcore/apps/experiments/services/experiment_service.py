"""
Experiment sweeps. Each (n, trial) owns its random stream, so rows do not
depend on the worker count; rows are written sorted.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

from bapcore.apps.experiments.models.config import ExperimentConfig
from bapcore.apps.experiments.schemas.rows import CsvRow, ExperimentRow, KstarRow, MergeRow
from bapcore.apps.experiments.services.generator_service import cluster_split, generate_instance, trial_rng
from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import Matching
from bapcore.apps.greedy.services.greedy_service import greedy_assign
from bapcore.apps.merge.models.partition import Partition
from bapcore.apps.merge.services.merge_service import merge_or_warmstart
from bapcore.apps.network.models.comm_graph import CommGraph
from bapcore.apps.network.models.metrics import RoundMetrics
from bapcore.apps.network.services.distributed_prune_service import run_distributed_prune_bap
from bapcore.apps.pruner.models.trace import PruneTrace
from bapcore.apps.pruner.services.prune_service import prune_bap
from bapcore.config import ExperimentName, Strategy
from bapcore.logger import get_logger
from bapcore.utils.io_utils import write_csv

logger = get_logger(__name__)

ROW_TYPES: dict[ExperimentName, type[CsvRow]] = {
    ExperimentName.COMPLEXITY: ExperimentRow,
    ExperimentName.CONVERGENCE: ExperimentRow,
    ExperimentName.MESSAGE: ExperimentRow,
    ExperimentName.OPTIMGAP: ExperimentRow,
    ExperimentName.KSTAR: KstarRow,
    ExperimentName.MERGE: MergeRow,
}


def time_after_iterations(trace: PruneTrace, diameter: int) -> list[int]:
    """Elapsed time steps at the end of every pruneBAP iteration."""
    elapsed, out = 0, []
    for record in trace.records:
        elapsed += (1 + record.search_iters) * diameter
        out.append(elapsed)
    return out


def steps_to_beat(trace: PruneTrace, diameter: int, target: Optional[float]) -> Optional[int]:
    """First time step at which the running matching is strictly lighter than target."""
    if target is None:
        return None
    if trace.initial_weight < target:
        return 0
    for record, elapsed in zip(trace.records, time_after_iterations(trace, diameter)):
        if record.found and record.matching_weight < target:
            return elapsed
    return None


def _solve(
    g: WeightedBipartiteGraph, comm: CommGraph, strategy: Strategy, simulate: bool
) -> tuple[PruneTrace, RoundMetrics]:
    if simulate:
        _, trace, metrics = run_distributed_prune_bap(g, comm, strategy=strategy, validate=False)
        return trace, metrics
    _, trace = prune_bap(g, strategy=strategy, validate=False)
    return trace, RoundMetrics.from_trace(trace, comm)


def _standard_rows(cfg: ExperimentConfig, n: int, trial: int) -> list[CsvRow]:
    m = cfg.agents_for(n)
    rng = trial_rng(cfg.seed, n, trial)
    g = generate_instance(n, m, cfg.distribution, rng)
    comm = CommGraph.from_spec(cfg.topology, m, seed=int(rng.integers(2**31)))
    greedy = greedy_assign(g, comm)
    g_weight = greedy.largest_weight if greedy.largest_weight is not None else 0.0

    rows: list[CsvRow] = []
    for strategy in cfg.strategies:
        trace, metrics = _solve(g, comm, strategy, cfg.simulate)
        h = trace.final_weight
        if cfg.name is ExperimentName.KSTAR:
            rows.append(
                KstarRow(
                    n=n, m=m, trial=trial, strategy=strategy.value, iteration=0, time_step=0,
                    weight=trace.initial_weight, greedy_weight=g_weight, greedy_time_steps=greedy.time_steps,
                )
            )
            for record, elapsed in zip(trace.records, time_after_iterations(trace, comm.diameter)):
                rows.append(
                    KstarRow(
                        n=n, m=m, trial=trial, strategy=strategy.value, iteration=record.iteration,
                        time_step=elapsed, weight=record.matching_weight, greedy_weight=g_weight,
                        greedy_time_steps=greedy.time_steps,
                    )
                )
            continue
        rows.append(
            ExperimentRow(
                n=n,
                m=m,
                trial=trial,
                strategy=strategy.value,
                prune_iterations=trace.iterations,
                search_iterations=trace.search_iterations,
                time_steps=metrics.time_steps,
                messages_sent=metrics.messages_sent,
                max_explored_per_round=metrics.max_explored_per_round,
                mean_explored_per_round=metrics.mean_explored_per_round,
                max_payload_items=metrics.max_payload_items,
                bottleneck_weight=h,
                greedy_weight=g_weight,
                gap=g_weight - h,
                greedy_time_steps=greedy.time_steps,
                steps_to_beat_greedy=steps_to_beat(trace, comm.diameter, greedy.largest_weight),
            )
        )
    return rows


def _merge_rows(cfg: ExperimentConfig, n: int, trial: int) -> list[CsvRow]:
    m = cfg.agents_for(n)
    rng = trial_rng(cfg.seed, n, trial)
    g = generate_instance(n, m, cfg.distribution, rng)
    m1, n1 = cluster_split(m, n)
    seed = int(rng.integers(2**31))
    skeleton = Partition.from_split(g, m1, n1, Matching.empty(m1))

    rows: list[CsvRow] = []
    for strategy in cfg.strategies:
        M1, trace1 = prune_bap(skeleton.g1, strategy=strategy)
        M2, trace2 = prune_bap(skeleton.g2, strategy=strategy)
        p = Partition.from_split(g, m1, n1, M1, M2)
        merged, report, _ = merge_or_warmstart(p, strategy)
        _, warm = prune_bap(g, p.union_matching(), strategy, validate=False)
        _, cold = prune_bap(g, strategy=strategy, validate=False)
        sub_steps = max(
            RoundMetrics.from_trace(trace1, CommGraph.from_spec(cfg.topology, m1, seed=seed)).time_steps,
            RoundMetrics.from_trace(trace2, CommGraph.from_spec(cfg.topology, m - m1, seed=seed)).time_steps,
        )
        rows.append(
            MergeRow(
                n=n,
                m=m,
                trial=trial,
                strategy=strategy.value,
                decision=report.decision.value,
                cond_i=report.cond_i,
                cond_ii=report.cond_ii,
                cond_iii=report.cond_iii,
                hypotheses_hold=report.hypotheses_hold,
                bound=report.bound,
                union_weight=p.union_matching().bottleneck(g.weight),
                merged_weight=merged.bottleneck(g.weight),
                optimal_weight=cold.final_weight,
                warm_iterations=warm.iterations,
                cold_iterations=cold.iterations,
                sub_time_steps=sub_steps,
            )
        )
    return rows


def run_trial(cfg: ExperimentConfig, n: int, trial: int) -> list[CsvRow]:
    if cfg.name is ExperimentName.MERGE:
        return _merge_rows(cfg, n, trial)
    return _standard_rows(cfg, n, trial)


def collect_rows(cfg: ExperimentConfig) -> list[CsvRow]:
    jobs = [(n, trial) for n in cfg.n_values for trial in range(cfg.trials)]
    log = logger.bind(experiment=cfg.name.value, trials=cfg.trials, workers=cfg.workers)
    rows: list[CsvRow] = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(run_trial, cfg, n, trial) for n, trial in jobs]
            for future in futures:
                rows.extend(future.result())
    else:
        for n in cfg.n_values:
            log.info("Running trials", extra={"n": n})
            for trial in range(cfg.trials):
                rows.extend(run_trial(cfg, n, trial))
    rows.sort(key=lambda r: r.sort_key())
    return rows


def run_experiment(cfg: ExperimentConfig) -> Path:
    """Run the sweep and write one CSV with a row per (n, trial, strategy)."""
    rows = collect_rows(cfg)
    header = ROW_TYPES[cfg.name].columns()
    write_csv(cfg.out, header, (row.csv_row() for row in rows))
    logger.info("Experiment written", extra={"experiment": cfg.name.value, "rows": len(rows), "out": str(cfg.out)})
    return cfg.out
