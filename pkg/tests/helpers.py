"""
Builders for theories and open programs written as program text.
"""

from apps.logic.connected import LayeredTheory
from apps.logic.parser import parse_clause, parse_constraints, parse_theory
from apps.logic.terms import OpenProgram, Theory


def theory(*clauses: str) -> Theory:
    """Build a theory from clause strings."""
    return Theory(parse_clause(text) for text in clauses)


def layered(*layers) -> LayeredTheory:
    """Build a layered theory from lists of clause strings, layer 1 first."""
    return LayeredTheory(tuple(theory(*layer) for layer in layers))


def open_program(background: str, abducibles=(), constraints: str = "") -> OpenProgram:
    """Build <B, U, I> from program text, signatures and constraint text."""
    goals = parse_constraints(constraints) if constraints else ()
    return OpenProgram(parse_theory(background), frozenset(abducibles), goals)
