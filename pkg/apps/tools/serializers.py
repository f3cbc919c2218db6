"""
Pydantic models for tool parameters and command results.
"""

from enum import Enum
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from apps.core.exceptions import EXIT_ERROR, EXIT_FAIL, EXIT_PASS

SCHEMA_VERSION = 1


class RunStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"


EXIT_CODES = {RunStatus.PASS: EXIT_PASS, RunStatus.FAIL: EXIT_FAIL, RunStatus.ERROR: EXIT_ERROR}


class RunResult(BaseModel):
    """Outcome of one CLI invocation; ``--json`` prints exactly this model."""

    schema_version: int = SCHEMA_VERSION
    command: Optional[str] = None
    status: RunStatus
    payload: Dict[str, Any] = Field(default_factory=dict)
    diagnostics: List[str] = Field(default_factory=list)
    # human-readable rendering, not part of the JSON schema
    lines: List[str] = Field(default_factory=list, exclude=True)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


class CommonParameters(BaseModel):
    """Flags shared by every subcommand."""

    model_config = ConfigDict(extra="ignore")

    json_output: bool = False
    depth_bound: Optional[int] = Field(default=None, ge=0)
    verbosity: int = Field(default=1, ge=0, le=3)


class EntailsParameters(CommonParameters):
    programs: List[str] = Field(min_length=1)
    query: Optional[str] = None
    clause: Optional[str] = None

    @model_validator(mode="after")
    def check_target(self) -> "EntailsParameters":
        if (self.query is None) == (self.clause is None):
            raise ValueError("Give exactly one of --query or --clause")
        return self


class LeastModelParameters(CommonParameters):
    program: str
    oracle: bool = False


class CheckSubsumeParameters(CommonParameters):
    c: Optional[str] = None
    d: Optional[str] = None
    s: Optional[str] = None
    t: Optional[str] = None
    oracle: bool = False

    @model_validator(mode="after")
    def check_operands(self) -> "CheckSubsumeParameters":
        clauses = self.c is not None or self.d is not None
        theories = self.s is not None or self.t is not None
        if clauses == theories:
            raise ValueError("Give either --c and --d (clauses) or --s and --t (theory files)")
        if clauses and (self.c is None or self.d is None):
            raise ValueError("Both --c and --d are required")
        if theories and (self.s is None or self.t is None):
            raise ValueError("Both --s and --t are required")
        if theories and self.oracle:
            raise ValueError("--oracle applies to single clauses only")
        return self


class OpenProgramParameters(CommonParameters):
    """An open program <B, U, I> and a ground example."""

    program: str
    constraints: Optional[str] = None
    abducibles: Optional[str] = None
    example: str


class VerifyCtParameters(OpenProgramParameters):
    layered: str


class DeriveCtParameters(OpenProgramParameters):
    hypothesis: str
    relation: Literal["ctis", "ctg", "both"] = "ctis"
    layered: Optional[str] = None

    @model_validator(mode="after")
    def check_layered(self) -> "DeriveCtParameters":
        if self.layered is not None and self.relation != "ctg":
            raise ValueError("A hand-supplied --layered theory is only checked with --relation ctg")
        return self


class VerifyTheoremParameters(CommonParameters):
    runs: int = Field(ge=1)
    seed: int
    workers: int = Field(default=1, ge=1)
    counterexample_dir: Optional[str] = None


class InduceParameters(OpenProgramParameters):
    generalization_budget: int = Field(ge=1)
    max_candidates: int = Field(ge=1)
    max_clause_vars: int = Field(ge=0)
    max_theory_clauses: int = Field(ge=1)
    max_body_literals: int = Field(ge=0)
