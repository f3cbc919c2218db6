"""
Base class for reasoning tool commands.

Every subcommand is a Django management command under
apps/tools/management/commands/ whose Command class inherits from BaseTool.
A run yields a RunResult whose status maps to the exit code: 0 pass,
1 fail, 2 error. Results go to stdout, logs and diagnostics to stderr.
"""

import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Type

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError, CommandParser

from pydantic import ValidationError

from apps.core.exceptions import (
    EXIT_ERROR,
    EXIT_FAIL,
    EXIT_PASS,
    FileReadError,
    LogicToolboxError,
    NonGroundError,
    ToolValidationError,
    build_error_payload,
    exit_code_for,
)
from apps.core.utils import get_text_hash, parse_signature_list, read_text_file
from apps.logic.parser import (
    ProgramFile,
    SymbolTable,
    parse_atom,
    parse_constraints,
    parse_layered_theory,
    parse_program,
)
from apps.logic.terms import Atom, OpenProgram

from .serializers import CommonParameters, OpenProgramParameters, RunResult, RunStatus

logger = logging.getLogger(__name__)

# Django's -v 0..3 mapped onto the "apps" logger; 1 keeps the configured level.
VERBOSITY_LEVELS = {0: logging.ERROR, 2: logging.INFO, 3: logging.DEBUG}


@dataclass
class ToolOutcome:
    """What a tool hands back to the CLI: verdict, structured payload and text lines."""

    passed: bool
    payload: Dict[str, Any] = field(default_factory=dict)
    lines: List[str] = field(default_factory=list)
    diagnostics: List[str] = field(default_factory=list)


def _first_error(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ()))
    message = first.get("msg", "invalid value")
    return f"{location}: {message}" if location else message


def error_result(command: Optional[str], exc: BaseException) -> RunResult:
    """RunResult for an exception; TheoremViolationError counts as a fail, the rest as errors."""
    payload = build_error_payload(exc)
    status = RunStatus.FAIL if exit_code_for(exc) == EXIT_FAIL else RunStatus.ERROR
    return RunResult(command=command, status=status, payload=payload, diagnostics=[str(exc)])


def render(result: RunResult, json_output: bool) -> str:
    """Text written to stdout for a result."""
    if json_output:
        return result.to_json() + "\n"
    return "".join(f"{line}\n" for line in result.lines)


class BaseTool(BaseCommand):
    """
    Abstract base class for all reasoning tool commands.

    Tool commands must inherit from this class and implement:
    - add_arguments(): Declare subcommand flags
    - process(): Execute tool logic on validated parameters
    """

    # Subcommand name as reported in results (override in subclass)
    name: str = ""
    help = ""

    parameters_model: Type[CommonParameters] = CommonParameters

    # No models or databases to check
    requires_system_checks: List[str] = []

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.logger = logger.getChild(self.name)
        self.symbols = SymbolTable()
        self.inputs: Dict[str, str] = {}
        self.exit_code = EXIT_PASS

    def create_parser(self, prog_name: str, subcommand: str, **kwargs: Any) -> CommandParser:
        """Django's parser plus the flags every subcommand shares."""
        kwargs.setdefault("allow_abbrev", False)
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.add_argument(
            "--json",
            dest="json_output",
            action="store_true",
            help="Print the versioned machine-readable result",
        )
        parser.add_argument(
            "--depth-bound",
            type=int,
            default=None,
            help="Maximal term depth; enables programs with function symbols",
        )
        return parser

    def add_arguments(self, parser: CommandParser) -> None:
        """Declare the subcommand's own flags."""
        raise NotImplementedError("subclasses of BaseTool must provide an add_arguments() method")

    def validate(self, parameters: Dict[str, Any]) -> Tuple[bool, Optional[str]]:
        """
        Validate parameters against the tool's parameter model.

        Returns:
            Tuple of (is_valid, error_message)
        """
        try:
            self.parameters_model.model_validate(parameters)
        except ValidationError as e:
            return False, _first_error(e)
        return True, None

    def clean(self, parameters: Dict[str, Any]) -> CommonParameters:
        """
        Return validated parameters.

        Raises:
            ToolValidationError: If the parameters do not validate
        """
        is_valid, error = self.validate(parameters)
        if not is_valid:
            raise ToolValidationError(f"{self.name}: {error}", details={"tool": self.name})
        return self.parameters_model.model_validate(parameters)

    def process(self, params: CommonParameters) -> ToolOutcome:
        """
        Execute tool logic.

        Args:
            params: Validated parameters

        Returns:
            ToolOutcome with the verdict and result payload

        Raises:
            LogicToolboxError: On bad input or a violated precondition
        """
        raise NotImplementedError("subclasses of BaseTool must provide a process() method")

    def evaluate(self, parameters: Dict[str, Any]) -> ToolOutcome:
        """Validate, reset per-run state and process."""
        params = self.clean(parameters)
        self.symbols = SymbolTable()
        self.inputs = {}
        outcome = self.process(params)
        if self.inputs:
            outcome.payload["inputs"] = dict(sorted(self.inputs.items()))
        return outcome

    def run_tool(self, options: Dict[str, Any]) -> RunResult:
        """
        Evaluate parsed options into a RunResult.

        Never raises for bad input; errors become a result with status error.
        """
        self.logger.debug(f"Running {self.name} with {options}")
        try:
            outcome = self.evaluate(options)
        except LogicToolboxError as e:
            return error_result(self.name, e)
        except Exception as e:
            self.logger.exception(f"Unexpected failure in {self.name}")
            return error_result(self.name, e)

        return RunResult(
            command=self.name,
            status=RunStatus.PASS if outcome.passed else RunStatus.FAIL,
            payload=outcome.payload,
            diagnostics=outcome.diagnostics,
            lines=outcome.lines,
        )

    def handle(self, *args: Any, **options: Any) -> str:
        """
        Run the tool and write its result.

        Raises:
            CommandError: With return code 2 when the run ends in an error
        """
        apps_logger = logging.getLogger("apps")
        previous_level = apps_logger.level
        verbosity = options.get("verbosity", 1)
        level = VERBOSITY_LEVELS.get(verbosity)
        if level is not None:
            if verbosity > 1:
                level = min(apps_logger.getEffectiveLevel(), level)
            apps_logger.setLevel(level)
        try:
            result = self.run_tool(options)
        finally:
            apps_logger.setLevel(previous_level)

        json_output = options.get("json_output", False)
        self.exit_code = result.exit_code
        self.stdout.write(render(result, json_output), ending="")
        if result.exit_code == EXIT_ERROR:
            raise CommandError("; ".join(result.diagnostics), returncode=EXIT_ERROR)
        if not json_output:
            for message in result.diagnostics:
                self.stderr.write(f"{result.status.value}: {message}")
        return ""

    def run_from_argv(self, argv: List[str]) -> None:
        """Django's command-line path, exiting 1 on a failed verdict."""
        super().run_from_argv(argv)
        if self.exit_code != EXIT_PASS:
            sys.exit(self.exit_code)

    # -- shared helpers ------------------------------------------------------

    def depth_bound(self, params: CommonParameters) -> Optional[int]:
        """The --depth-bound flag, else the configured default."""
        if params.depth_bound is not None:
            return params.depth_bound
        return settings.DEPTH_BOUND

    def read_input(self, path: str) -> str:
        """
        Read an input file and record its digest.

        Raises:
            FileReadError: If the file cannot be read or is too large
        """
        text = read_text_file(path)
        if len(text.encode("utf-8")) > settings.MAX_INPUT_SIZE:
            max_mb = settings.MAX_INPUT_SIZE / (1024 * 1024)
            raise FileReadError(f"{path} exceeds the maximum input size of {max_mb:.0f}MB")
        self.inputs[path] = get_text_hash(text)
        self.logger.debug(f"Read {path} ({len(text)} characters)")
        return text

    def load_program(self, path: str) -> ProgramFile:
        return parse_program(self.read_input(path), source=path, symbols=self.symbols)

    def load_constraints(self, path: Optional[str]) -> tuple:
        if not path:
            return ()
        return parse_constraints(self.read_input(path), source=path, symbols=self.symbols)

    def load_layered(self, path: str):
        return parse_layered_theory(self.read_input(path), source=path, symbols=self.symbols)

    def parse_ground_atom(self, text: str, what: str = "Example") -> Atom:
        atom = parse_atom(text, symbols=self.symbols)
        if not atom.is_ground():
            raise NonGroundError(f"{what} must be ground, got '{atom}'")
        return atom

    def load_open_program(self, params: OpenProgramParameters) -> Tuple[OpenProgram, Atom]:
        """Build <B, U, I> from the program, constraint and abducible inputs plus the example."""
        program_file = self.load_program(params.program)
        abducibles = set(program_file.abducibles)
        if params.abducibles:
            for name, arity in parse_signature_list(params.abducibles):
                self.symbols.declare_predicate(name, arity, source="--abducibles")
                abducibles.add((name, arity))
        constraints = self.load_constraints(params.constraints)
        example = self.parse_ground_atom(params.example)
        program = OpenProgram(program_file.theory, frozenset(abducibles), constraints)
        self.logger.info(
            f"Open program: {len(program.background)} clauses, "
            f"{len(abducibles)} abducibles, {len(constraints)} constraints"
        )
        return program, example


def add_open_program_arguments(parser: CommandParser) -> None:
    """Flags naming an open program <B, U, I> and an example."""
    parser.add_argument("--program", required=True, help="Background program file B")
    parser.add_argument("--constraints", help="Integrity constraint file I")
    parser.add_argument(
        "--abducibles", help="Extra abducible signatures U, e.g. 'flies/1,q/0'"
    )
    parser.add_argument("--example", required=True, help="Ground example atom e")
