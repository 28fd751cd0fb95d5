from abc import ABC, abstractmethod
from argparse import ArgumentParser, Namespace


class BaseCommand(ABC):
    """Base command class."""

    help: str = ""

    def __init__(self, command_name: str):
        self.command_name = command_name

    @abstractmethod
    def add_arguments(self, parser: ArgumentParser) -> None:
        """Register the command's flags."""

    @abstractmethod
    def execute(self, args: Namespace) -> int:
        """Execute the command and return its exit code."""
