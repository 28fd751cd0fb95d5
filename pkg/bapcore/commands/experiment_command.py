from argparse import ArgumentParser, Namespace

from pydantic import ValidationError

from bapcore.apps.experiments.models.config import ExperimentConfig
from bapcore.apps.experiments.services.experiment_service import run_experiment
from bapcore.apps.experiments.services.generator_service import parse_n_range
from bapcore.bases.base_command import BaseCommand
from bapcore.commands.solve_command import STRATEGY_CHOICES
from bapcore.config import Distribution, ExperimentName, Strategy, settings
from bapcore.exceptions import InvalidInputException, create_validation_errors


class ExperimentCommand(BaseCommand):
    help = "Run an experiment sweep and write its CSV."

    def add_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("--name", required=True, choices=[e.value for e in ExperimentName])
        parser.add_argument("--n", required=True, help="a:b, a:b:step, a,b,c or a single value")
        parser.add_argument("--m", type=int, default=None)
        parser.add_argument("--trials", type=int, default=settings.DEFAULT_TRIALS)
        parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
        parser.add_argument("--topology", default=settings.DEFAULT_TOPOLOGY)
        parser.add_argument(
            "--strategy", action="append", choices=STRATEGY_CHOICES, default=None, help="repeat for several"
        )
        parser.add_argument("--dist", choices=[d.value for d in Distribution], default=None)
        parser.add_argument("--workers", type=int, default=settings.WORKERS)
        parser.add_argument("--simulate", action="store_true", help="run the simulator instead of trace accounting")
        parser.add_argument("--out", required=True)

    def execute(self, args: Namespace) -> int:
        try:
            cfg = ExperimentConfig(
                name=args.name,
                n_values=parse_n_range(args.n),
                m=args.m,
                trials=args.trials,
                seed=args.seed,
                topology=args.topology,
                strategies=[Strategy.parse(s) for s in args.strategy or []],
                distribution=args.dist,
                out=args.out,
                workers=args.workers,
                simulate=args.simulate,
            )
        except ValidationError as e:
            raise InvalidInputException(
                "Invalid experiment configuration",
                error_details=create_validation_errors(
                    {".".join(str(p) for p in err["loc"]) or "config": err["msg"] for err in e.errors()}
                ),
            ) from e
        out = run_experiment(cfg)
        print(f"wrote {out}")
        return 0
