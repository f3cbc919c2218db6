"""
Least Herbrand model computation with provenance.

Semi-naive bottom-up evaluation: an atom's depth is the iteration that first
derived it (facts at depth 1) and its provenance is the ground clause instance
whose firing produced it. All entailment questions reduce to membership in a
least model.
"""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from apps.core.exceptions import NonGroundError, NotEntailedError

from .subsumption import Bindings, apply_atom, apply_clause, match_atom
from .terms import (
    Atom,
    Clause,
    DefiniteGoal,
    Expression,
    Term,
    Theory,
    sorted_atoms,
    universe_for,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LeastModel:
    """Least Herbrand model of a theory with derivation depth and provenance."""

    atoms: FrozenSet[Atom]
    depth: Dict[Atom, int] = field(default_factory=dict)
    provenance: Dict[Atom, Clause] = field(default_factory=dict)
    universe: Tuple[Term, ...] = ()
    depth_bound: Optional[int] = None

    def __contains__(self, atom: object) -> bool:
        return atom in self.atoms

    def __len__(self) -> int:
        return len(self.atoms)

    def ordered(self) -> List[Atom]:
        """Atoms ordered by depth, then canonically."""
        return sorted(self.atoms, key=lambda atom: (self.depth[atom], atom.sort_key()))

    def max_depth(self) -> int:
        return max(self.depth.values(), default=0)


class _Index:
    """Derived atoms grouped by predicate signature, in derivation order."""

    def __init__(self) -> None:
        self.by_signature: Dict[Tuple[str, int], List[Atom]] = defaultdict(list)
        self.depth: Dict[Atom, int] = {}

    def add(self, atom: Atom, depth: int) -> None:
        self.depth[atom] = depth
        self.by_signature[atom.signature].append(atom)

    def candidates(self, signature: Tuple[str, int], low: int, high: int) -> Iterator[Atom]:
        for atom in self.by_signature.get(signature, ()):
            if low <= self.depth[atom] <= high:
                yield atom


def _join(
    literals: Sequence[Atom],
    index: _Index,
    bounds: Sequence[Tuple[int, int]],
    bindings: Bindings,
) -> Iterator[Bindings]:
    if not literals:
        yield bindings
        return
    low, high = bounds[0]
    for candidate in index.candidates(literals[0].signature, low, high):
        extended = match_atom(literals[0], candidate, bindings)
        if extended is not None:
            yield from _join(literals[1:], index, bounds[1:], extended)


def _complete(
    clause: Clause, bindings: Bindings, universe: Sequence[Term]
) -> Iterator[Bindings]:
    """Ground the head variables that no body literal binds."""
    free = [var.name for var in clause.head.variables() if var.name not in bindings]
    free = list(dict.fromkeys(free))
    if not free:
        yield bindings
        return
    for values in itertools.product(universe, repeat=len(free)):
        extended = dict(bindings)
        extended.update(zip(free, values))
        yield extended


def _within_bound(atom: Atom, depth_bound: Optional[int]) -> bool:
    return depth_bound is None or atom.depth() <= depth_bound


def least_model(
    theory: Iterable[Clause],
    *,
    depth_bound: Optional[int] = None,
    extra: Iterable[Expression] = (),
) -> LeastModel:
    """
    Compute the least Herbrand model of a definite theory.

    Args:
        theory: Definite clauses
        depth_bound: Maximal term depth k; required when function symbols occur
        extra: Further expressions whose symbols join the Herbrand universe

    Returns:
        LeastModel with depth and provenance for every atom

    Raises:
        InfiniteUniverseError: If function symbols occur and no depth bound is set
    """
    program = theory if isinstance(theory, Theory) else Theory(theory)
    universe = universe_for(program, *extra, depth_bound=depth_bound)
    rules = sorted(program.clauses, key=lambda clause: clause.sort_key())
    index = _Index()
    provenance: Dict[Atom, Clause] = {}

    def fire(clause: Clause, bindings: Bindings, level: int, derived: List[Atom]) -> None:
        for complete in _complete(clause, bindings, universe):
            head = apply_atom(complete, clause.head)
            if head in index.depth or not _within_bound(head, depth_bound):
                continue
            index.add(head, level)
            provenance[head] = apply_clause(complete, clause)
            derived.append(head)

    level = 1
    delta: List[Atom] = []
    for clause in rules:
        if clause.is_fact():
            fire(clause, {}, level, delta)

    while delta:
        level += 1
        previous = level - 1
        derived: List[Atom] = []
        for clause in rules:
            if clause.is_fact():
                continue
            body = clause.ordered_body()
            for pivot in range(len(body)):
                # literals before the pivot read old atoms, the pivot reads the
                # last delta, literals after it read everything derived so far
                ordered = [body[pivot], *body[:pivot], *body[pivot + 1 :]]
                bounds = [(previous, previous)]
                bounds += [(1, previous - 1)] * pivot
                bounds += [(1, previous)] * (len(body) - pivot - 1)
                for bindings in _join(ordered, index, bounds, {}):
                    fire(clause, bindings, level, derived)
        delta = derived
        logger.debug(f"Fixpoint iteration {level}: {len(derived)} new atoms")

    return LeastModel(
        atoms=frozenset(index.depth),
        depth=dict(index.depth),
        provenance=provenance,
        universe=tuple(universe),
        depth_bound=depth_bound,
    )


def entails_atom(
    theory: Iterable[Clause], atom: Atom, *, depth_bound: Optional[int] = None
) -> bool:
    """
    Decide T ⊨ a for a ground atom.

    Raises:
        NonGroundError: If the atom has variables
    """
    if not atom.is_ground():
        raise NonGroundError(f"Entailment query must be ground, got '{atom}'")
    return atom in least_model(theory, depth_bound=depth_bound, extra=[atom])


def entails_ground_clause(
    theory: Iterable[Clause], clause: Clause, *, depth_bound: Optional[int] = None
) -> bool:
    """
    Decide T ⊨ D for a ground definite clause via T ∪ facts(D-) ⊨ D+.

    Raises:
        NonGroundError: If the clause has variables
    """
    if not clause.is_ground():
        raise NonGroundError(f"Entailment check needs a ground clause, got '{clause}'")
    program = Theory(theory).union(Theory.facts(clause.body))
    return clause.head in least_model(program, depth_bound=depth_bound, extra=[clause])


def goal_matches(goal: DefiniteGoal, model: LeastModel) -> Iterator[Tuple[Atom, ...]]:
    """Yield the ground instances of a goal whose atoms all hold in the model."""
    index = _Index()
    for atom in model.ordered():
        index.add(atom, model.depth[atom])
    literals = goal.ordered_body()
    top = model.max_depth()
    bounds = [(1, top)] * len(literals)
    for bindings in _join(literals, index, bounds, {}):
        yield tuple(apply_atom(bindings, literal) for literal in literals)


def constraint_violations(
    background: Iterable[Clause],
    hypothesis: Iterable[Clause],
    constraints: Iterable[DefiniteGoal],
    *,
    depth_bound: Optional[int] = None,
) -> List[Tuple[DefiniteGoal, Tuple[Atom, ...]]]:
    """Return each goal of I with its first grounding satisfied in M(B ∪ H)."""
    goals = list(constraints)
    if not goals:
        return []
    program = Theory(background).union(Theory(hypothesis))
    model = least_model(program, depth_bound=depth_bound, extra=goals)
    violations = []
    for goal in goals:
        for grounding in goal_matches(goal, model):
            violations.append((goal, grounding))
            break
    return violations


def is_consistent(
    background: Iterable[Clause],
    hypothesis: Iterable[Clause],
    constraints: Iterable[DefiniteGoal],
    *,
    depth_bound: Optional[int] = None,
) -> bool:
    """Decide B ∪ H ∪ I ⊭ false: no goal of I is satisfied in M(B ∪ H)."""
    return not constraint_violations(
        background, hypothesis, constraints, depth_bound=depth_bound
    )


def ground_support(
    theory: Iterable[Clause], atom: Atom, *, depth_bound: Optional[int] = None
) -> Theory:
    """
    Extract a finite set S of ground instances of T's clauses with S ⊨ e.

    Walks provenance from the atom downward, so every returned clause lies on
    the derivation tree of the atom.

    Raises:
        NotEntailedError: If T does not entail the atom
    """
    if not atom.is_ground():
        raise NonGroundError(f"Support extraction needs a ground atom, got '{atom}'")
    model = least_model(theory, depth_bound=depth_bound, extra=[atom])
    if atom not in model:
        raise NotEntailedError(f"'{atom}' is not entailed, no ground support exists")
    collected: Dict[Atom, Clause] = {}
    pending = [atom]
    while pending:
        current = pending.pop()
        if current in collected:
            continue
        clause = model.provenance[current]
        collected[current] = clause
        pending.extend(sorted_atoms(clause.body))
    ordered = sorted(collected, key=lambda head: (model.depth[head], head.sort_key()))
    return Theory(collected[head] for head in ordered)
