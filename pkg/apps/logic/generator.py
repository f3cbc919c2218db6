"""
Seeded random generators for inductive solutions, small programs and clause pairs.

Every generator takes a ``random.Random`` so callers control reproducibility;
``instance_rng(seed, index)`` derives the stream used for one harness instance.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .entailment import constraint_violations, least_model
from .subsumption import apply_clause
from .terms import (
    Atom,
    Clause,
    Compound,
    DefiniteGoal,
    OpenProgram,
    Term,
    Theory,
    Variable,
    sorted_atoms,
)

logger = logging.getLogger(__name__)

VARIABLE_NAMES = ("X", "Y", "Z")


class GeneratorBounds(BaseModel):
    """Signature and size limits for generated inductive solutions."""

    model_config = ConfigDict(frozen=True)

    max_predicates: int = Field(default=4, ge=2)
    max_arity: int = Field(default=2, ge=0)
    max_constants: int = Field(default=4, ge=1)
    max_background: int = Field(default=6, ge=1)
    max_hypothesis: int = Field(default=3, ge=1)
    max_body: int = Field(default=2, ge=0)
    max_constraints: int = Field(default=2, ge=0)
    max_attempts: int = Field(default=500, ge=1)


@dataclass(frozen=True)
class GeneratedInstance:
    """An open program, a ground example and an inductive solution for it."""

    program: OpenProgram
    example: Atom
    hypothesis: Theory
    attempts: int = 1


def instance_rng(seed: int, index: int) -> random.Random:
    """Independent stream for instance ``index`` of a run seeded with ``seed``."""
    return random.Random(seed * 1_000_003 + index)


@dataclass(frozen=True)
class _Signature:
    predicates: Tuple[Tuple[str, int], ...]
    constants: Tuple[Compound, ...]


def _signature(rng: random.Random, bounds: GeneratorBounds) -> _Signature:
    count = rng.randint(2, bounds.max_predicates)
    predicates = tuple((f"p{i}", rng.randint(0, bounds.max_arity)) for i in range(count))
    constants = tuple(Compound(f"c{i}") for i in range(rng.randint(1, bounds.max_constants)))
    return _Signature(predicates, constants)


def _random_atom(
    rng: random.Random,
    predicate: Tuple[str, int],
    constants: Sequence[Term],
    variables: Sequence[Variable],
    variable_ratio: float = 0.5,
) -> Atom:
    name, arity = predicate
    args: List[Term] = []
    for _ in range(arity):
        if variables and rng.random() < variable_ratio:
            args.append(rng.choice(variables))
        else:
            args.append(rng.choice(constants))
    return Atom(name, tuple(args))


def _random_clause(
    rng: random.Random,
    head_predicates: Sequence[Tuple[str, int]],
    body_predicates: Sequence[Tuple[str, int]],
    constants: Sequence[Term],
    max_body: int,
) -> Clause:
    """A range-restricted clause: head variables all occur in the body."""
    size = rng.randint(0, max_body)
    variables = [Variable(name) for name in VARIABLE_NAMES[: rng.randint(1, 2)]]
    body = [
        _random_atom(rng, rng.choice(body_predicates), constants, variables)
        for _ in range(size)
    ]
    bound = sorted({var for atom in body for var in atom.variables()}, key=lambda v: v.name)
    head = _random_atom(rng, rng.choice(head_predicates), constants, bound)
    return Clause(head, frozenset(body))


def generate_instance(
    rng: random.Random, bounds: Optional[GeneratorBounds] = None
) -> GeneratedInstance:
    """
    Rejection-sample an inductive solution (P, e, H) whose hypothesis heads are abducible.

    Background heads are never abducible; the example is an atom entailed by
    B ∪ H but not by B, and every kept constraint is satisfied by B ∪ H.

    Raises:
        RuntimeError: If no instance is found within ``max_attempts`` tries
    """
    bounds = bounds or GeneratorBounds()
    for attempt in range(1, bounds.max_attempts + 1):
        signature = _signature(rng, bounds)
        predicates = list(signature.predicates)
        abducible_count = rng.randint(1, len(predicates) - 1)
        abducibles = predicates[:abducible_count]
        defined = predicates[abducible_count:]

        background = Theory(
            _random_clause(rng, defined, predicates, signature.constants, bounds.max_body)
            for _ in range(rng.randint(1, bounds.max_background))
        )
        hypothesis = Theory(
            _random_clause(rng, abducibles, predicates, signature.constants, bounds.max_body)
            for _ in range(rng.randint(1, bounds.max_hypothesis))
        )
        base = least_model(background, extra=[hypothesis])
        combined = least_model(background.union(hypothesis))
        fresh = [atom for atom in sorted_atoms(combined.atoms) if atom not in base]
        if not fresh:
            continue
        example = rng.choice(fresh)

        constraints: List[DefiniteGoal] = []
        for _ in range(rng.randint(0, bounds.max_constraints)):
            goal = DefiniteGoal(
                frozenset(
                    _random_atom(rng, rng.choice(predicates), signature.constants, [])
                    for _ in range(rng.randint(1, 2))
                )
            )
            if not constraint_violations(background, hypothesis, [goal]):
                constraints.append(goal)

        program = OpenProgram(background, frozenset(abducibles), tuple(constraints))
        logger.debug(f"Generated instance after {attempt} attempt(s): example {example}")
        return GeneratedInstance(program, example, hypothesis, attempt)
    raise RuntimeError(f"No inductive solution found in {bounds.max_attempts} attempts")


def random_program(
    rng: random.Random,
    max_base: int = 12,
    max_clauses: int = 5,
    max_body: int = 2,
) -> Theory:
    """A small function-free program whose Herbrand base has at most ``max_base`` atoms."""
    while True:
        constants = [Compound(f"c{i}") for i in range(rng.randint(1, 3))]
        predicates = [(f"p{i}", rng.randint(0, 2)) for i in range(rng.randint(1, 4))]
        if sum(len(constants) ** arity for _, arity in predicates) <= max_base:
            break
    variables = [Variable(name) for name in VARIABLE_NAMES[:2]]
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        body = [
            _random_atom(rng, rng.choice(predicates), constants, variables)
            for _ in range(rng.randint(0, max_body))
        ]
        head = _random_atom(rng, rng.choice(predicates), constants, variables)
        clauses.append(Clause(head, frozenset(body)))
    return Theory(clauses)


def _random_term(rng: random.Random, variables: Sequence[Variable], depth: int) -> Term:
    roll = rng.random()
    if depth > 0 and roll < 0.2:
        return Compound("f", (_random_term(rng, variables, depth - 1),))
    if variables and roll < 0.6:
        return rng.choice(variables)
    return Compound(rng.choice("ab"))


def _random_literals(
    rng: random.Random, variables: Sequence[Variable], count: int
) -> List[Atom]:
    predicates = [("p", 1), ("q", 2), ("r", 1)]
    atoms = []
    for _ in range(count):
        name, arity = rng.choice(predicates)
        atoms.append(Atom(name, tuple(_random_term(rng, variables, 1) for _ in range(arity))))
    return atoms


def random_clause_pair(rng: random.Random) -> Tuple[Clause, Clause]:
    """
    A pair (C, D) within the subsumption oracle bounds.

    About half the pairs are built so that C subsumes D, by instantiating C and
    adding literals; the rest are independent.
    """
    general_vars = [Variable(name) for name in ("X", "Y", "Z")[: rng.randint(1, 3)]]
    specific_vars = [Variable(name) for name in ("U", "W")[: rng.randint(0, 2)]]
    while True:
        head, *body = _random_literals(rng, general_vars, rng.randint(1, 3))
        general = Clause(head, frozenset(body))
        if rng.random() < 0.5:
            mapping = {
                var.name: _random_term(rng, specific_vars, 1) for var in general.variables()
            }
            instance = apply_clause(mapping, general)
            padding = _random_literals(rng, specific_vars, rng.randint(0, 1))
            specific = Clause(instance.head, instance.body | frozenset(padding))
        else:
            head, *body = _random_literals(rng, specific_vars, rng.randint(1, 3))
            specific = Clause(head, frozenset(body))
        if _subterm_count(specific) <= 8:
            return general, specific


def _subterm_count(clause: Clause) -> int:
    seen = set()
    stack: List[Term] = [arg for atom in (clause.head, *clause.body) for arg in atom.args]
    while stack:
        term = stack.pop()
        seen.add(term)
        if isinstance(term, Compound):
            stack.extend(term.args)
    return len(seen)
