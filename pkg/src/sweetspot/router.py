"""Subcommand-to-command routing for sweetspot."""

import importlib
import pkgutil
from typing import Dict, List

from sweetspot.commands.base import BaseCommand
from sweetspot.errors import SweetspotError


class UnknownCommandError(SweetspotError):
    """Raised when no command is registered for a name."""
    pass


class CommandRouter:
    """Routes subcommand names to their command handlers."""

    def __init__(self):
        self._commands: Dict[str, BaseCommand] = {}

    def register(self, name: str, command: BaseCommand) -> None:
        self._commands[name] = command

    def get_command(self, name: str) -> BaseCommand:
        """Get the command handler for a subcommand.

        Raises:
            UnknownCommandError: If no command is registered for the name.
        """
        if name not in self._commands:
            raise UnknownCommandError(f"No command registered for: {name}")
        return self._commands[name]

    def has_command(self, name: str) -> bool:
        return name in self._commands

    @property
    def command_names(self) -> List[str]:
        """Registered subcommand names, sorted."""
        return sorted(self._commands)


def discover_commands() -> CommandRouter:
    """Auto-discover and register all command handlers.

    Scans the commands package for BaseCommand subclasses,
    instantiates each and registers it under its name.
    """
    from sweetspot import commands

    router = CommandRouter()

    for _, modname, _ in pkgutil.iter_modules(commands.__path__):
        if modname == "base":
            continue

        module = importlib.import_module(f"sweetspot.commands.{modname}")

        # Imported names are skipped; each class registers from its own module
        for attr in dir(module):
            obj = getattr(module, attr)
            if (isinstance(obj, type) and
                    issubclass(obj, BaseCommand) and
                    obj is not BaseCommand and
                    obj.__module__ == module.__name__):
                command = obj()
                router.register(command.name, command)

    return router
