"""
Theorem Harness Tool

Runs the completeness harness over seeded random inductive solutions: every
one must have a connected theory whose clauses H subsumes.
"""

from django.conf import settings
from django.core.management.base import CommandParser

from apps.logic.harness import run_theorem_harness
from apps.tools.base import BaseTool, ToolOutcome
from apps.tools.serializers import VerifyTheoremParameters


class Command(BaseTool):
    """Property harness over generated inductive solutions."""

    name = "verify-theorem"
    help = (
        "Check that random inductive solutions are derivable "
        "by connected theory inverse subsumption."
    )

    parameters_model = VerifyTheoremParameters

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument(
            "--runs", type=int, default=settings.HARNESS_RUNS, help="Number of instances"
        )
        parser.add_argument("--seed", type=int, default=settings.HARNESS_SEED, help="Run seed")
        parser.add_argument(
            "--workers",
            type=int,
            default=settings.HARNESS_WORKERS,
            help="Worker processes (results are ordered by instance index)",
        )
        parser.add_argument(
            "--counterexample-dir",
            default=settings.HARNESS_COUNTEREXAMPLE_DIR or None,
            help="Directory for counterexample bundles",
        )

    def process(self, params: VerifyTheoremParameters) -> ToolOutcome:
        self.logger.info(f"Running {params.runs} instances with seed {params.seed}")
        summary = run_theorem_harness(
            params.runs,
            params.seed,
            workers=params.workers,
            counterexample_dir=params.counterexample_dir,
        )
        lines = [
            f"seed {summary.seed}: {summary.witnesses}/{summary.runs} total subsumption witnesses",
            f"connected-theory clauses checked: {summary.clauses}",
            f"multi-layer theories: {summary.multi_layer} (max {summary.max_layers} layers)",
        ]
        return ToolOutcome(passed=True, payload=summary.to_dict(), lines=lines)
