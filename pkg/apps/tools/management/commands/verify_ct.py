"""
Connected Theory Verifier

Checks a hand-written layered theory against every connected-theory
condition and reports the offending atoms and clauses.
"""

from django.core.management.base import CommandParser

from apps.logic.connected import verify_connected_theory
from apps.tools.base import BaseTool, ToolOutcome, add_open_program_arguments
from apps.tools.serializers import VerifyCtParameters


class Command(BaseTool):
    """Verify a layered theory for an open program and example."""

    name = "verify-ct"
    help = "Check the connected-theory conditions of a layered theory file."

    parameters_model = VerifyCtParameters

    def add_arguments(self, parser: CommandParser) -> None:
        add_open_program_arguments(parser)
        parser.add_argument(
            "--layered", required=True, help="Layered theory file, layer 1 first, split by #layer"
        )

    def process(self, params: VerifyCtParameters) -> ToolOutcome:
        program, example = self.load_open_program(params)
        layered = self.load_layered(params.layered)
        report = verify_connected_theory(
            program, example, layered, depth_bound=self.depth_bound(params)
        )

        lines = [
            f"base: {'ok' if report.condition_base else 'FAILED'}",
            *(
                f"chain[{i}]: {'ok' if holds else 'FAILED'}"
                for i, holds in enumerate(report.condition_chain, start=1)
            ),
            f"example: {'ok' if report.condition_example else 'FAILED'}",
            f"consistent: {'ok' if report.condition_consistent else 'FAILED'}",
            f"abducible: {'ok' if report.condition_abducible else 'FAILED'}",
        ]
        diagnostics = [f"{f.condition}: {f.subject}" for f in report.failures]
        payload = {"example": str(example), "layers": layered.n, **report.to_dict()}
        return ToolOutcome(
            passed=report.passed, payload=payload, lines=lines, diagnostics=diagnostics
        )
