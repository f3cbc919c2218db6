"""
Custom exceptions for LogicToolbox.

Provides structured error handling with consistent CLI responses. Every error
carries a machine-readable code and the process exit code it maps to.
"""

import logging
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


class LogicToolboxError(Exception):
    """Base exception class for all custom LogicToolbox exceptions."""

    exit_code: int = EXIT_ERROR
    default_detail: str = "An error occurred"
    default_code: str = "error"

    def __init__(
        self,
        detail: Optional[str] = None,
        code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.detail = detail if detail is not None else self.default_detail
        self.code = code if code is not None else self.default_code
        self.details = details or {}
        super().__init__(self.detail)

    def get_full_details(self) -> Dict[str, Any]:
        """Return message, code and any extra context as one dictionary."""
        return {"message": self.detail, "code": self.code, **self.details}


class ParseError(LogicToolboxError):
    """Raised when program text is malformed."""

    default_detail = "Syntax error"
    default_code = "parse_error"

    def __init__(
        self,
        detail: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
        source: Optional[str] = None,
    ):
        self.line = line
        self.column = column
        self.source = source
        details: Dict[str, Any] = {}
        if line is not None:
            details["line"] = line
            details["column"] = column
        if source:
            details["source"] = source
        super().__init__(detail, details=details)

    def __str__(self) -> str:
        location = ""
        if self.source:
            location = f"{self.source}:"
        if self.line is not None:
            location += f"{self.line}:{self.column}: "
        elif location:
            location += " "
        return f"{location}{self.detail}"


class ArityClashError(ParseError):
    """Raised when a predicate or functor is used with two different arities."""

    default_detail = "Arity clash"
    default_code = "arity_clash"


class NonGroundError(LogicToolboxError):
    """Raised when an operation requires a ground atom or clause."""

    default_detail = "Expected a ground expression"
    default_code = "non_ground"


class EmptyUniverseError(LogicToolboxError):
    """Raised when a clause with variables is grounded over an empty universe."""

    default_detail = "Herbrand universe is empty"
    default_code = "empty_universe"


class InfiniteUniverseError(LogicToolboxError):
    """Raised when function symbols appear and no depth bound is configured."""

    default_detail = "Function symbols require a depth bound (--depth-bound)"
    default_code = "infinite_universe"


class PreconditionError(LogicToolboxError):
    """Raised when an operation is called outside its precondition."""

    default_detail = "Precondition violated"
    default_code = "precondition_violated"


class NotEntailedError(PreconditionError):
    """Raised when an atom that must be entailed is not."""

    default_detail = "Atom is not entailed"
    default_code = "not_entailed"


class DegenerateTheoryError(PreconditionError):
    """Raised when no hypothesis clause takes part in deriving the example."""

    default_detail = "No hypothesis clause is used to derive the example"
    default_code = "degenerate_theory"


class LayeredTheoryError(LogicToolboxError):
    """Raised when a layered theory breaks its structural invariants."""

    default_detail = "Invalid layered theory"
    default_code = "invalid_layered_theory"


class InductionError(LogicToolboxError):
    """Raised when hypothesis search cannot start."""

    default_detail = "Induction failed"
    default_code = "induction_error"


class OracleBoundsError(LogicToolboxError):
    """Raised when an instance is too large for a brute-force oracle."""

    default_detail = "Instance exceeds oracle bounds"
    default_code = "oracle_bounds_exceeded"


class FileReadError(LogicToolboxError):
    """Raised when an input file cannot be read."""

    default_detail = "Cannot read input file"
    default_code = "file_read_error"


class ToolValidationError(LogicToolboxError):
    """Raised when tool input validation fails."""

    default_detail = "Tool validation failed"
    default_code = "tool_validation_error"


class UsageError(LogicToolboxError):
    """Raised on unknown flags or malformed command lines."""

    default_detail = "Invalid command line"
    default_code = "usage_error"


class TheoremViolationError(LogicToolboxError):
    """Raised when the completeness harness finds a counterexample."""

    exit_code = EXIT_FAIL
    default_detail = "Theorem harness found a counterexample"
    default_code = "theorem_violation"

    def __init__(self, detail: Optional[str] = None, bundle: Optional[Dict[str, Any]] = None):
        self.bundle = bundle or {}
        super().__init__(detail, details={"bundle": self.bundle} if bundle else None)


def build_error_payload(exc: BaseException) -> Dict[str, Any]:
    """
    Build a consistent error structure for any exception.

    Returns:
        Dictionary with structure:
        {
            "error": {
                "message": "Human-readable error message",
                "code": "machine_readable_error_code",
                "details": {...}  # Optional additional details
            }
        }
    """
    if isinstance(exc, LogicToolboxError):
        message = str(exc)
        code = exc.code
        details = exc.details
    else:
        message = str(exc) or exc.__class__.__name__
        code = "internal_error"
        details = {}

    error_response: Dict[str, Any] = {"error": {"message": message, "code": code}}
    if details:
        error_response["error"]["details"] = details

    logger.error(
        f"Error: {message}",
        extra={"error_code": code},
        exc_info=not isinstance(exc, LogicToolboxError),
    )
    return error_response


def exit_code_for(exc: BaseException) -> int:
    """Return the process exit code an exception maps to."""
    return getattr(exc, "exit_code", EXIT_ERROR)
