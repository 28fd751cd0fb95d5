import json
from argparse import ArgumentParser, Namespace

from bapcore.apps.experiments.services.generator_service import load_instance
from bapcore.apps.graph.services.oracle_service import brute_force_bottleneck
from bapcore.bases.base_command import BaseCommand
from bapcore.utils.io_utils import format_weight


class OracleCommand(BaseCommand):
    help = "Exhaustive bottleneck assignment of a small instance."

    def add_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("--instance", required=True)

    def execute(self, args: Namespace) -> int:
        g, _ = load_instance(args.instance)
        M, weight = brute_force_bottleneck(g)
        print(f"bottleneck {format_weight(weight)}")
        print(json.dumps({"matched_task": M.to_list()}))
        return 0
