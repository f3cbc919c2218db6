"""
Entailment Tool

Decides T ⊨ a for a ground atom or T ⊨ D for a ground clause by least model
membership. Several program files are joined into one theory.
"""

from typing import List

from django.core.management.base import CommandParser

from apps.core.exceptions import NonGroundError
from apps.logic.entailment import entails_ground_clause, least_model
from apps.logic.parser import parse_clause
from apps.logic.terms import Theory
from apps.tools.base import BaseTool, ToolOutcome
from apps.tools.serializers import EntailsParameters


class Command(BaseTool):
    """Decide entailment of a ground atom or ground clause."""

    name = "entails"
    help = "Decide whether a definite program entails a ground atom or ground clause."

    parameters_model = EntailsParameters

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument(
            "--program",
            dest="programs",
            action="append",
            required=True,
            help="Program file; repeat to join several (e.g. B and H)",
        )
        target = parser.add_mutually_exclusive_group(required=True)
        target.add_argument("--query", help="Ground atom, e.g. 'flies(a)'")
        target.add_argument("--clause", help="Ground clause, e.g. 'p(a) :- q(a).'")

    def process(self, params: EntailsParameters) -> ToolOutcome:
        clauses: List = []
        for path in params.programs:
            clauses.extend(self.load_program(path).theory)
        theory = Theory(clauses)
        depth_bound = self.depth_bound(params)

        if params.query is not None:
            atom = self.parse_ground_atom(params.query, "Query")
            model = least_model(theory, depth_bound=depth_bound, extra=[atom])
            entailed = atom in model
            payload = {"query": str(atom), "entailed": entailed}
            if entailed:
                payload["depth"] = model.depth[atom]
                payload["derived_by"] = str(model.provenance[atom])
            target = str(atom)
        else:
            clause = parse_clause(params.clause, symbols=self.symbols)
            if not clause.is_ground():
                raise NonGroundError(f"Clause must be ground, got '{clause}'")
            entailed = entails_ground_clause(theory, clause, depth_bound=depth_bound)
            payload = {"clause": str(clause), "entailed": entailed}
            target = str(clause)

        self.logger.info(f"{target} entailed: {entailed}")
        verdict = "entailed" if entailed else "not entailed"
        return ToolOutcome(passed=entailed, payload=payload, lines=[f"{target}: {verdict}"])
