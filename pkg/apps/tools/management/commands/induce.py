"""
Hypothesis Search Tool

Induces hypotheses for one example by generalizing connected theories over
the abducible predicates.
"""

from django.conf import settings
from django.core.management.base import CommandParser

from apps.logic.induction import SearchConfig, induce
from apps.logic.parser import format_theory
from apps.tools.base import BaseTool, ToolOutcome, add_open_program_arguments
from apps.tools.serializers import InduceParameters


class Command(BaseTool):
    """Search hypotheses derivable by connected theory inverse subsumption."""

    name = "induce"
    help = "Induce hypotheses for an example from generalized connected theories."

    parameters_model = InduceParameters

    def add_arguments(self, parser: CommandParser) -> None:
        add_open_program_arguments(parser)
        parser.add_argument(
            "--generalization-budget",
            type=int,
            default=settings.SEARCH_GENERALIZATION_BUDGET,
            help="Generalizations kept per connected-theory clause",
        )
        parser.add_argument(
            "--max-candidates",
            type=int,
            default=settings.SEARCH_MAX_CANDIDATES,
            help="Maximum number of hypotheses returned",
        )
        parser.add_argument(
            "--max-clause-vars",
            type=int,
            default=settings.SEARCH_MAX_CLAUSE_VARS,
            help="Maximum distinct variables per hypothesis clause",
        )
        parser.add_argument(
            "--max-theory-clauses",
            type=int,
            default=settings.SEARCH_MAX_THEORY_CLAUSES,
            help="Maximum clauses per connected theory",
        )
        parser.add_argument(
            "--max-body-literals",
            type=int,
            default=settings.SEARCH_MAX_BODY_LITERALS,
            help="Maximum body literals per connected-theory clause",
        )

    def process(self, params: InduceParameters) -> ToolOutcome:
        program, example = self.load_open_program(params)
        config = SearchConfig(
            generalization_budget=params.generalization_budget,
            max_candidates=params.max_candidates,
            max_clause_vars=params.max_clause_vars,
            max_theory_clauses=params.max_theory_clauses,
            max_body_literals=params.max_body_literals,
        )
        hypotheses = induce(program, example, config, depth_bound=self.depth_bound(params))

        payload = {
            "example": str(example),
            "config": config.model_dump(),
            "hypotheses": [[str(clause) for clause in h] for h in hypotheses],
        }
        lines = []
        for number, hypothesis in enumerate(hypotheses, start=1):
            lines.append(f"% hypothesis {number}")
            lines.extend(format_theory(hypothesis).splitlines())
        if not hypotheses:
            lines.append("% no hypothesis within the search bounds")
        return ToolOutcome(passed=bool(hypotheses), payload=payload, lines=lines)
