"""
Connected Theory Derivation Tool

Builds the connected theory T = S ∩ ground(H) for an inductive solution H and
checks CTIS (H subsumes T clause-wise), CTG (H entails T clause-wise) or both.
"""

from django.core.management.base import CommandParser

from apps.logic.induction import derive_ctg, verify_ctis
from apps.logic.parser import format_layered_theory
from apps.tools.base import BaseTool, ToolOutcome, add_open_program_arguments
from apps.tools.serializers import DeriveCtParameters


class Command(BaseTool):
    """Derive the connected theory of a hypothesis and check CTIS/CTG."""

    name = "derive-ct"
    help = (
        "Construct the connected theory of H and check derivability "
        "by subsumption or entailment."
    )

    parameters_model = DeriveCtParameters

    def add_arguments(self, parser: CommandParser) -> None:
        add_open_program_arguments(parser)
        parser.add_argument("--hypothesis", required=True, help="Hypothesis file H")
        parser.add_argument(
            "--relation",
            choices=["ctis", "ctg", "both"],
            default="ctis",
            help="Derivability relation to check (default: ctis)",
        )
        parser.add_argument(
            "--layered", help="Check CTG against this layered theory instead of the constructed one"
        )

    def process(self, params: DeriveCtParameters) -> ToolOutcome:
        program, example = self.load_open_program(params)
        hypothesis = self.load_program(params.hypothesis).theory
        depth_bound = self.depth_bound(params)

        if params.layered is not None:
            layered = self.load_layered(params.layered)
            witness = derive_ctg(
                program, example, hypothesis, layered=layered, depth_bound=depth_bound
            )
        elif params.relation == "ctg":
            witness = derive_ctg(program, example, hypothesis, depth_bound=depth_bound)
        else:
            witness = verify_ctis(program, example, hypothesis, depth_bound=depth_bound)

        checks = {
            "ctis": [witness.ctis_holds],
            "ctg": [witness.ctg_holds],
            "both": [witness.ctis_holds, witness.ctg_holds],
        }[params.relation]
        passed = all(checks)

        payload = {"example": str(example), "relation": params.relation, **witness.to_dict()}
        lines = format_layered_theory(witness.theory).splitlines()
        for target, (source, theta) in sorted(
            witness.subsumption_map.items(), key=lambda item: item[0].sort_key()
        ):
            lines.append(f"% {target}  subsumed by  {source}  {theta}")
        for clause, flag in sorted(
            witness.entailment_flags.items(), key=lambda item: item[0].sort_key()
        ):
            lines.append(f"% {clause}  {'entailed' if flag else 'NOT entailed'} by H")
        diagnostics = [f"no subsumer in H: {clause}" for clause in witness.missing]
        diagnostics += [f"{f.condition}: {f.subject}" for f in witness.report.failures]
        if witness.missing:
            self.logger.error(
                f"Subsumption property violated for {example}: {len(witness.missing)} clause(s)"
            )
        return ToolOutcome(passed=passed, payload=payload, lines=lines, diagnostics=diagnostics)
