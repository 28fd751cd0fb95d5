"""Command-line entry point: gen | solve | oracle | experiment | merge."""

import json
import logging
import sys
from argparse import ArgumentParser
from typing import Optional, Sequence

from bapcore.bases.base_command import BaseCommand
from bapcore.commands.experiment_command import ExperimentCommand
from bapcore.commands.gen_command import GenCommand
from bapcore.commands.merge_command import MergeCommand
from bapcore.commands.oracle_command import OracleCommand
from bapcore.commands.solve_command import SolveCommand
from bapcore.config import settings
from bapcore.exceptions import BapException, format_exception_response
from bapcore.logger import configure_logging, get_logger

logger = get_logger(__name__)

COMMANDS: list[BaseCommand] = [
    GenCommand("gen"),
    SolveCommand("solve"),
    OracleCommand("oracle"),
    ExperimentCommand("experiment"),
    MergeCommand("merge"),
]


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="bapcore", description="Distributed bottleneck assignment solver.")
    parser.add_argument("--verbose", "-v", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command_parser = sub.add_parser(command.command_name, help=command.help)
        command.add_arguments(command_parser)
        command_parser.set_defaults(handler=command)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse has already printed usage
        return int(e.code) if isinstance(e.code, int) else 2

    level = logging.DEBUG if args.verbose else logging.getLevelName(settings.LOG_LEVEL.upper())
    configure_logging(level if isinstance(level, int) else logging.INFO)
    try:
        return args.handler.execute(args)
    except BapException as e:
        logger.error("Command failed", extra={"command": args.command, "error_code": e.error_code})
        print(json.dumps(format_exception_response(e), ensure_ascii=False), file=sys.stderr)
        return e.exit_code
