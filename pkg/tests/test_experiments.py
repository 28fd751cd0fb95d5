import csv

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.stats import spearmanr

from bapcore.apps.experiments.models.config import ExperimentConfig
from bapcore.apps.experiments.schemas.rows import ExperimentRow, KstarRow, MergeRow
from bapcore.apps.experiments.services.experiment_service import (
    collect_rows,
    run_experiment,
    steps_to_beat,
    time_after_iterations,
)
from bapcore.apps.pruner.services.prune_service import prune_bap
from bapcore.config import Distribution, ExperimentName, Strategy


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_defaults_per_experiment(tmp_path):
    cfg = ExperimentConfig(name="optimgap", n_values=[4], out=tmp_path / "x.csv")
    assert cfg.strategies == [Strategy.DFS_GREEDY]
    assert cfg.distribution is Distribution.UNIFORM_SQUARE
    cfg = ExperimentConfig(name="merge", n_values=[4], out=tmp_path / "x.csv")
    assert cfg.strategies == [Strategy.DFS_GREEDY, Strategy.BFS]
    assert cfg.distribution is Distribution.TWO_CLUSTERS
    assert cfg.agents_for(4) == 4


def test_config_rejects_inconsistent_sizes(tmp_path):
    with pytest.raises(ValidationError):
        ExperimentConfig(name="complexity", n_values=[4, 6], m=5, out=tmp_path / "x.csv")
    with pytest.raises(ValidationError):
        ExperimentConfig(name="merge", n_values=[1, 2], out=tmp_path / "x.csv")
    with pytest.raises(ValidationError):
        ExperimentConfig(name="complexity", n_values=[4], trials=0, out=tmp_path / "x.csv")


def test_time_accounting_of_four_by_four(i1):
    _, trace = prune_bap(i1)
    assert time_after_iterations(trace, 1) == [3, 8, 10]
    assert time_after_iterations(trace, 2) == [6, 16, 20]
    # greedy reaches 12: the running weight drops below it after the second pass
    assert steps_to_beat(trace, 1, 12) == 8
    assert steps_to_beat(trace, 1, 20) == 0
    assert steps_to_beat(trace, 1, 5) is None
    assert steps_to_beat(trace, 1, None) is None


def test_complexity_rows(tmp_path):
    cfg = ExperimentConfig(name="complexity", n_values=[3, 4], trials=2, seed=5, out=tmp_path / "c.csv")
    out = run_experiment(cfg)
    rows = read_csv(out)
    assert rows[0] == ExperimentRow.columns()
    assert len(rows) == 1 + 2 * 2 * 2
    body = [dict(zip(rows[0], r)) for r in rows[1:]]
    assert [(r["n"], r["trial"], r["strategy"]) for r in body][:2] == [("3", "0", "bfs"), ("3", "0", "dfs_greedy")]
    for r in body:
        assert float(r["gap"]) == pytest.approx(float(r["greedy_weight"]) - float(r["bottleneck_weight"]))
        assert float(r["gap"]) >= 0


def test_rows_do_not_depend_on_workers_or_simulation(tmp_path):
    base = dict(name="convergence", n_values=[3, 5], trials=2, seed=9, topology="ring", out=tmp_path / "a.csv")
    serial = collect_rows(ExperimentConfig(**base))
    parallel = collect_rows(ExperimentConfig(**base, workers=2))
    simulated = collect_rows(ExperimentConfig(**base, simulate=True))
    assert serial == parallel
    assert serial == simulated


def test_kstar_rows_start_at_time_zero(tmp_path):
    cfg = ExperimentConfig(name="kstar", n_values=[5], trials=1, strategies=[Strategy.DFS_GREEDY], out=tmp_path / "k.csv")
    rows = collect_rows(cfg)
    assert all(isinstance(r, KstarRow) for r in rows)
    assert rows[0].iteration == 0 and rows[0].time_step == 0
    weights = [r.weight for r in rows]
    assert weights == sorted(weights, reverse=True)
    assert [r.iteration for r in rows] == list(range(len(rows)))


def test_merge_rows(tmp_path):
    cfg = ExperimentConfig(name="merge", n_values=[4], trials=3, out=tmp_path / "m.csv")
    rows = collect_rows(cfg)
    assert len(rows) == 3 * 2
    for r in rows:
        assert isinstance(r, MergeRow)
        assert r.union_weight == r.bound
        assert r.optimal_weight <= r.bound
        assert r.warm_iterations >= 1
        if r.decision == "warm_start_required":
            assert r.merged_weight == r.optimal_weight
    row = read_csv(run_experiment(cfg))[1]
    assert row[4] in ("reuse_union", "warm_start_required")
    assert row[5] in ("0", "1")


@pytest.mark.slow
def test_optimgap_sweep_size(tmp_path):
    cfg = ExperimentConfig(name=ExperimentName.OPTIMGAP, n_values=list(range(4, 21)), trials=10, out=tmp_path / "o.csv")
    rows = read_csv(run_experiment(cfg))
    assert len(rows) == 1 + 170


@pytest.mark.slow
def test_bfs_explores_more_per_round_than_dfs(tmp_path):
    cfg = ExperimentConfig(name="complexity", n_values=[12], trials=10, seed=2, out=tmp_path / "t.csv")
    rows = collect_rows(cfg)
    by_strategy = {s: [r for r in rows if r.strategy == s] for s in ("bfs", "dfs_greedy")}
    assert all(r.max_explored_per_round <= 1 for r in by_strategy["dfs_greedy"])
    assert max(r.max_explored_per_round for r in by_strategy["bfs"]) > 1


@pytest.mark.slow
def test_complexity_trends_with_size(tmp_path):
    n_values = list(range(4, 29, 4))
    cfg = ExperimentConfig(
        name="complexity",
        n_values=n_values,
        trials=100,
        strategies=[Strategy.DFS_GREEDY, Strategy.BFS],
        out=tmp_path / "trend.csv",
    )
    rows = collect_rows(cfg)

    def mean(n, strategy, column):
        values = [getattr(r, column) for r in rows if r.n == n and r.strategy == strategy]
        assert len(values) == 100
        return float(np.mean(values))

    time_gap = []
    bfs_width = []
    for n in n_values:
        dfs_prunes, bfs_prunes = mean(n, "dfs_greedy", "prune_iterations"), mean(n, "bfs", "prune_iterations")
        assert dfs_prunes <= bfs_prunes
        if n >= 8:
            assert dfs_prunes < bfs_prunes
        dfs_time, bfs_time = mean(n, "dfs_greedy", "time_steps"), mean(n, "bfs", "time_steps")
        if n >= 12:
            assert bfs_time < dfs_time
        time_gap.append(dfs_time - bfs_time)
        bfs_width.append(mean(n, "bfs", "max_explored_per_round"))

    assert spearmanr(n_values, time_gap).statistic > 0.8
    assert spearmanr(n_values, bfs_width).statistic > 0.8
    assert bfs_width[-1] > bfs_width[0]
