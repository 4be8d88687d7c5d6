"""Command handlers for CLI subcommands."""

from sweetspot.commands.base import BaseCommand, CommandOutput, Table

__all__ = ["BaseCommand", "CommandOutput", "Table"]
