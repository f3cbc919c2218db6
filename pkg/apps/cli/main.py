"""
Command-line entry point.

The subcommands are the Django management commands of apps.tools, spelled
with hyphens (least-model) or underscores (least_model). Exit codes: 0 pass,
1 fail, 2 error. Results go to stdout, logs and diagnostics to stderr.
"""

import os
import sys
from typing import List, Optional, Sequence

import django
from django.apps import apps as app_registry
from django.core.management import ManagementUtility, get_commands, load_command_class
from django.core.management.base import CommandError

from apps.core.exceptions import EXIT_ERROR, EXIT_PASS, UsageError
from apps.tools.base import BaseTool, error_result
from apps.tools.serializers import RunResult

PROG = "logictoolbox"
TOOLS_APP = "apps.tools"
DEFAULT_SETTINGS_MODULE = "logictoolbox.settings.base"


def setup() -> None:
    """Configure Django once; settings come from DJANGO_SETTINGS_MODULE."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", DEFAULT_SETTINGS_MODULE)
    if not app_registry.ready:
        django.setup()


def command_name(name: str) -> str:
    """Module name of a subcommand: 'least-model' -> 'least_model'."""
    return name.replace("-", "_")


def tool_commands() -> List[str]:
    """Subcommand names as documented, sorted."""
    return sorted(
        name.replace("_", "-") for name, app in get_commands().items() if app == TOOLS_APP
    )


def load_tool(name: str) -> BaseTool:
    return load_command_class(TOOLS_APP, command_name(name))


def run(argv: Sequence[str]) -> RunResult:
    """
    Parse a subcommand's arguments, run it and collect its result.

    Never raises for bad input; usage errors become a RunResult with status error.
    """
    setup()
    arguments = list(argv)
    if not arguments or arguments[0].replace("_", "-") not in tool_commands():
        given = arguments[0] if arguments else "(none)"
        message = f"Unknown command {given}; choose from {', '.join(tool_commands())}"
        return error_result(None, UsageError(message))

    tool = load_tool(arguments[0])
    parser = tool.create_parser(PROG, arguments[0])
    try:
        options = parser.parse_args(arguments[1:])
    except CommandError as e:
        return error_result(None, UsageError(f"{arguments[0]}: {e}"))
    return tool.run_tool(vars(options))


class ToolboxUtility(ManagementUtility):
    """Django's dispatcher, restricted in help to the reasoning tools."""

    def __init__(self, argv: Optional[List[str]] = None) -> None:
        super().__init__(argv)
        if self.prog_name == "__main__.py":
            self.prog_name = "python -m apps.cli"

    def main_help_text(self, commands_only: bool = False) -> str:
        names = tool_commands()
        if commands_only:
            return "\n".join(names)
        usage = [
            f"Usage: {self.prog_name} <command> [options]",
            "",
            "Reasoning over definite logic programs and connected theories.",
            "",
            "Commands:",
        ]
        usage += [f"    {name:<16}{load_tool(name).help}" for name in names]
        usage += ["", f"Type '{self.prog_name} help <command>' for help on a specific command."]
        return "\n".join(usage)

    def fetch_command(self, subcommand: str) -> BaseTool:
        name = command_name(subcommand)
        if name not in get_commands():
            sys.stderr.write(
                f"Unknown command: {subcommand!r}\n"
                f"Type '{self.prog_name} help' for usage.\n"
            )
            sys.exit(EXIT_ERROR)
        return super().fetch_command(name)

    def execute(self) -> None:
        if len(self.argv) < 2:
            setup()
            sys.stderr.write(self.main_help_text() + "\n")
            sys.exit(EXIT_ERROR)
        super().execute()


def execute_from_command_line(argv: Optional[List[str]] = None) -> None:
    """Run a subcommand the way Django's manage.py does."""
    utility = ToolboxUtility(argv)
    utility.execute()


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return the process exit code."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", DEFAULT_SETTINGS_MODULE)
    arguments = [PROG, *(sys.argv[1:] if argv is None else argv)]
    try:
        execute_from_command_line(arguments)
    except SystemExit as e:
        if e.code is None:
            return EXIT_PASS
        return e.code if isinstance(e.code, int) else EXIT_ERROR
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
