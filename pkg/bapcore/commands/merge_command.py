from argparse import ArgumentParser, Namespace

from bapcore.apps.experiments.services.generator_service import load_instance
from bapcore.apps.merge.services.merge_service import merge_or_warmstart, solve_partition
from bapcore.bases.base_command import BaseCommand
from bapcore.commands.solve_command import STRATEGY_CHOICES
from bapcore.config import Strategy, settings
from bapcore.exceptions import InvalidInputException
from bapcore.utils.io_utils import format_weight, write_json


def parse_split(text: str) -> tuple[int, int]:
    try:
        m1, n1 = (int(p) for p in text.split(","))
    except ValueError as e:
        raise InvalidInputException(f"Bad split '{text}', expected m1,n1") from e
    return m1, n1


class MergeCommand(BaseCommand):
    help = "Solve two sides of an instance and test whether their union is optimal."

    def add_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("--instance", required=True)
        parser.add_argument("--split", default=None, help="m1,n1 (default: the instance's split)")
        parser.add_argument("--strategy", choices=STRATEGY_CHOICES, default=settings.DEFAULT_STRATEGY.value)
        parser.add_argument("--verify", action="store_true", help="check criticality and optimality of both sides")
        parser.add_argument("--out", default=None, help="merge report JSON")

    def execute(self, args: Namespace) -> int:
        g, stored = load_instance(args.instance)
        split = parse_split(args.split) if args.split else stored
        if split is None:
            raise InvalidInputException("The instance has no split; pass --split m1,n1")
        strategy = Strategy.parse(args.strategy)
        p = solve_partition(g, *split, strategy, parallel=True)
        M, report, trace = merge_or_warmstart(p, strategy, verify=args.verify)
        if args.out:
            write_json(args.out, report)
        print(f"decision {report.decision.value}")
        print(f"cond_i {int(report.cond_i)} cond_ii {int(report.cond_ii)} cond_iii {int(report.cond_iii)}")
        print(f"bound {format_weight(report.bound)}")
        print(f"bottleneck {format_weight(M.bottleneck(g.weight))}")
        if trace is not None:
            print(f"warm_iterations {trace.iterations}")
        return 0
