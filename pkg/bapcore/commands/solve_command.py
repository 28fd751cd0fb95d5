import json
from argparse import ArgumentParser, Namespace
from typing import Optional

from bapcore.apps.experiments.services.generator_service import load_instance, load_matching
from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import Matching
from bapcore.apps.greedy.services.greedy_service import greedy_assign
from bapcore.apps.network.models.comm_graph import CommGraph
from bapcore.apps.network.models.metrics import RoundMetrics
from bapcore.apps.network.services.distributed_prune_service import run_distributed_prune_bap
from bapcore.apps.pruner.models.trace import PruneRecord
from bapcore.bases.base_command import BaseCommand
from bapcore.config import Strategy, settings
from bapcore.utils.io_utils import format_weight, write_csv

STRATEGY_CHOICES = ["dfs", "dfs-index", "bfs"] + [s.value for s in Strategy]


class SolveCommand(BaseCommand):
    help = "Run distributed pruneBAP on an instance."

    def add_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("--instance", required=True)
        parser.add_argument("--strategy", choices=STRATEGY_CHOICES, default=settings.DEFAULT_STRATEGY.value)
        parser.add_argument("--topology", default=settings.DEFAULT_TOPOLOGY, help="complete|path|ring|star|random[:p]|file:<json>")
        parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="seed of random topologies")
        parser.add_argument("--warm-start", default=None, help="matching JSON, or 'greedy'")
        parser.add_argument("--out", default=None, help="per-iteration trace CSV")
        parser.add_argument("--metrics-out", default=None, help="per-tick metrics CSV")

    def _warm_start(self, value: Optional[str], g: WeightedBipartiteGraph, comm: CommGraph) -> Optional[Matching]:
        if value is None:
            return None
        if value == "greedy":
            return greedy_assign(g, comm).matching
        return load_matching(value, g.m)

    def execute(self, args: Namespace) -> int:
        g, _ = load_instance(args.instance)
        comm = CommGraph.from_spec(args.topology, g.m, seed=args.seed)
        M0 = self._warm_start(args.warm_start, g, comm)
        M, trace, metrics = run_distributed_prune_bap(g, comm, M0, Strategy.parse(args.strategy))

        if args.out:
            write_csv(args.out, PruneRecord.CSV_COLUMNS, (r.csv_row() for r in trace.records))
        if args.metrics_out:
            write_csv(args.metrics_out, RoundMetrics.CSV_COLUMNS, metrics.csv_rows())

        if trace.final_bottleneck is not None:
            print(f"bottleneck {format_weight(trace.final_weight)}")
        print(f"iterations {trace.iterations}")
        print(f"time_steps {metrics.time_steps}")
        print(f"messages {metrics.messages_sent}")
        print(json.dumps({"matched_task": M.to_list()}))
        return 0
