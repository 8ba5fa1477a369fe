"""Command router for the string-toric CLI with decorator-based registration."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .config import Settings
from .exceptions import ValidationError
from .logger import get_logger

logger = get_logger(__name__)


@dataclass
class CommandResult:
    """What a command produced.

    Attributes:
        payload: JSON-serializable result
        text: Aligned plain-text rendering for ``--text``
        rows: One mapping per output line for batch commands
    """

    payload: Any
    text: str = ""
    rows: Optional[List[Dict[str, Any]]] = None


Handler = Callable[[argparse.Namespace, Settings], CommandResult]


@dataclass
class Option:
    """An argparse option shared between commands."""

    flags: Tuple[str, ...]
    kwargs: Dict[str, Any] = field(default_factory=dict)


@dataclass
class CommandInfo:
    """Information about a registered command.

    Attributes:
        name: The command name (e.g., "paths")
        handler: The function that handles the command
        description: Optional description for help text
        usage: Optional usage example
        options: Names of the shared options the command accepts
    """

    name: str
    handler: Handler
    description: str = ""
    usage: str = ""
    options: Tuple[str, ...] = ()


class _Parser(argparse.ArgumentParser):
    """Argument parser that raises instead of exiting on bad usage."""

    def error(self, message: str) -> Any:  # type: ignore[override]
        raise ValidationError(f"{self.prog}: {message}")


class CommandRouter:
    """Router for CLI subcommands with decorator-based registration.

    Example:
        >>> router = CommandRouter({"word": Option(("--word",), {"required": True})})
        >>>
        >>> @router.command("paths", description="List rigorous paths", options=("word",))
        >>> def paths_cmd(args, settings):
        ...     return CommandResult({"word": args.word})
        >>>
        >>> args = router.build_parser("string-toric").parse_args(["paths", "--word", "1"])
        >>> router.dispatch(args, Settings())
    """

    def __init__(
        self, options: Mapping[str, Option], global_options: Sequence[str] = ()
    ) -> None:
        """Initialize the command router.

        Args:
            options: Catalogue of options commands may declare
            global_options: Options every command accepts
        """
        self._commands: Dict[str, CommandInfo] = {}
        self._options = dict(options)
        self._global_options = tuple(global_options)
        logger.debug("CommandRouter initialized")

    def command(
        self, name: str, description: str = "", usage: str = "", options: Sequence[str] = ()
    ) -> Callable[[Handler], Handler]:
        """Decorator to register a command handler.

        Args:
            name: The subcommand name
            description: Description shown in help text
            usage: Usage example shown in help text
            options: Names from the option catalogue

        Returns:
            Decorator function
        """
        unknown = [o for o in options if o not in self._options]
        if unknown:
            raise KeyError(f"unknown options for {name}: {unknown}")

        def decorator(handler: Handler) -> Handler:
            self._commands[name.lower()] = CommandInfo(
                name=name.lower(),
                handler=handler,
                description=description,
                usage=usage,
                options=tuple(options),
            )
            logger.debug(f"Registered command: {name}")
            return handler

        return decorator

    def build_parser(self, prog: str) -> argparse.ArgumentParser:
        """Build an argparse parser with one subparser per registered command."""
        common = _Parser(add_help=False)
        for option_name in self._global_options:
            option = self._options[option_name]
            common.add_argument(*option.flags, **option.kwargs)

        parser = _Parser(prog=prog, description="Exact string polytope and toric fan computations")
        subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
        subparsers.required = True
        for name, info in sorted(self._commands.items()):
            sub = subparsers.add_parser(
                name, parents=[common], help=info.description, description=info.description
            )
            for option_name in info.options:
                option = self._options[option_name]
                sub.add_argument(*option.flags, **option.kwargs)
        return parser

    def dispatch(self, args: argparse.Namespace, settings: Settings) -> CommandResult:
        """Run the handler of the parsed command.

        Raises:
            ValidationError: If the command is not registered
        """
        command = (args.command or "").lower()
        if command not in self._commands:
            raise ValidationError(f"unknown command: {command!r}")
        logger.debug(f"Handling command: {command}")
        result = self._commands[command].handler(args, settings)
        logger.debug(f"Command '{command}' handled successfully")
        return result

    def help_text(self) -> str:
        """Help text for all registered commands."""
        lines = ["Available commands:"]
        for name, info in sorted(self._commands.items()):
            line = f"  {name}"
            if info.description:
                line += f" - {info.description}"
            if info.usage:
                line += f"\n    usage: {name} {info.usage}"
            lines.append(line)
        return "\n".join(lines)

    def get_commands(self) -> Dict[str, CommandInfo]:
        """Get a dictionary of all registered commands.

        Returns:
            Dictionary mapping command names to CommandInfo objects
        """
        return self._commands.copy()

    def has_command(self, name: str) -> bool:
        """Check if a command is registered."""
        return name.lower() in self._commands
