"""
Subsumption Tool

Decides theta-subsumption C ⪰ D between two clauses, or theory subsumption
S ⪰ T between two program files.
"""

import argparse

from django.core.management.base import CommandParser

from apps.logic.oracle import brute_subsumes
from apps.logic.parser import parse_clause
from apps.logic.subsumption import clause_subsumes, theory_subsumes
from apps.tools.base import BaseTool, ToolOutcome
from apps.tools.serializers import CheckSubsumeParameters


class Command(BaseTool):
    """Decide clause or theory subsumption and print the witness."""

    name = "check-subsume"
    help = "Decide theta-subsumption between clauses or theories and print witnesses."

    parameters_model = CheckSubsumeParameters

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--c", help="General clause C")
        parser.add_argument("--d", help="Specific clause D")
        parser.add_argument("--s", help="General theory file S")
        parser.add_argument("--t", help="Specific theory file T")
        parser.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)

    def process(self, params: CheckSubsumeParameters) -> ToolOutcome:
        if params.s is not None:
            return self._theories(params)

        general = parse_clause(params.c, symbols=self.symbols)
        specific = parse_clause(params.d, symbols=self.symbols)
        decide = brute_subsumes if params.oracle else clause_subsumes
        theta = decide(general, specific)
        payload = {
            "engine": "oracle" if params.oracle else "backtracking",
            "general": str(general),
            "specific": str(specific),
            "subsumes": theta is not None,
            "theta": str(theta) if theta is not None else None,
        }
        if theta is None:
            lines = [f"{general} does not subsume {specific}"]
        else:
            lines = [f"{general} subsumes {specific}", f"theta = {theta}"]
        return ToolOutcome(passed=theta is not None, payload=payload, lines=lines)

    def _theories(self, params: CheckSubsumeParameters) -> ToolOutcome:
        general = self.load_program(params.s).theory
        specific = self.load_program(params.t).theory
        witnesses = theory_subsumes(general, specific)
        if witnesses is None:
            uncovered = [
                str(target)
                for target in specific
                if all(clause_subsumes(candidate, target) is None for candidate in general)
            ]
            payload = {"subsumes": False, "uncovered": uncovered}
            lines = [f"S does not subsume T; uncovered: {clause}" for clause in uncovered]
            return ToolOutcome(passed=False, payload=payload, lines=lines)

        mapping = [
            {"clause": str(target), "by": str(source), "theta": str(theta)}
            for target, (source, theta) in witnesses.items()
        ]
        lines = ["S subsumes T"] + [
            f"  {item['clause']}  <=  {item['by']}  {item['theta']}" for item in mapping
        ]
        payload = {"subsumes": True, "witnesses": mapping}
        return ToolOutcome(passed=True, payload=payload, lines=lines)
