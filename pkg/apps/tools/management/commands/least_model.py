"""
Least Model Tool

Prints the least Herbrand model of a program with each atom's derivation
depth. The hidden --oracle flag computes the model by brute force instead.
"""

import argparse

from django.core.management.base import CommandParser

from apps.logic.entailment import least_model
from apps.logic.oracle import brute_minimal_model
from apps.logic.terms import sorted_atoms
from apps.tools.base import BaseTool, ToolOutcome
from apps.tools.serializers import LeastModelParameters


class Command(BaseTool):
    """Compute the least Herbrand model of a definite program."""

    name = "least-model"
    help = "Compute the least Herbrand model with derivation depth and provenance."

    parameters_model = LeastModelParameters

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--program", required=True, help="Program file")
        parser.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)

    def process(self, params: LeastModelParameters) -> ToolOutcome:
        theory = self.load_program(params.program).theory
        depth_bound = self.depth_bound(params)

        if params.oracle:
            atoms = sorted_atoms(brute_minimal_model(theory, depth_bound=depth_bound))
            payload = {"engine": "oracle", "size": len(atoms), "atoms": [str(a) for a in atoms]}
            return ToolOutcome(passed=True, payload=payload, lines=[f"{a}." for a in atoms])

        model = least_model(theory, depth_bound=depth_bound)
        ordered = model.ordered()
        payload = {
            "engine": "fixpoint",
            "size": len(model),
            "atoms": [
                {
                    "atom": str(atom),
                    "depth": model.depth[atom],
                    "derived_by": str(model.provenance[atom]),
                }
                for atom in ordered
            ],
        }
        self.logger.info(f"Least model has {len(model)} atoms, max depth {model.max_depth()}")
        lines = [f"{atom}.  % depth {model.depth[atom]}" for atom in ordered]
        return ToolOutcome(passed=True, payload=payload, lines=lines)
