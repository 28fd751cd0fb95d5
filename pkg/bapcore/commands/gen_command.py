from argparse import ArgumentParser, Namespace

from bapcore.apps.experiments.services.generator_service import cluster_split, generate_instance, save_instance
from bapcore.bases.base_command import BaseCommand
from bapcore.config import Distribution, settings
from bapcore.logger import get_logger

logger = get_logger(__name__)


class GenCommand(BaseCommand):
    help = "Generate a random Euclidean instance file."

    def add_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("--n", type=int, required=True, help="number of tasks")
        parser.add_argument("--m", type=int, default=None, help="number of agents (default: n)")
        parser.add_argument(
            "--dist", choices=[d.value for d in Distribution], default=Distribution.UNIFORM_SQUARE.value
        )
        parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
        parser.add_argument("--out", required=True, help="instance JSON to write")

    def execute(self, args: Namespace) -> int:
        """Write the instance; two-cluster instances record their split."""
        g = generate_instance(args.n, args.m, args.dist, args.seed)
        split = cluster_split(g.m, g.n) if args.dist == Distribution.TWO_CLUSTERS.value else None
        save_instance(args.out, g, split)
        logger.info("Instance generated", extra={"m": g.m, "n": g.n, "out": args.out})
        print(f"wrote {args.out} ({g.m} agents, {g.n} tasks)")
        return 0
