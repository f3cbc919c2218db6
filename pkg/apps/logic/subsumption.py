"""
Substitutions, theta-subsumption and anti-subsumption.

Clause subsumption matches heads to heads and body literals into the target
body by backtracking; target variables are treated as rigid symbols.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import partial
from typing import (
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from apps.core.exceptions import NonGroundError

from .terms import (
    Atom,
    Clause,
    Compound,
    DefiniteGoal,
    Term,
    Theory,
    Variable,
    VariantSet,
    sorted_atoms,
    term_sort_key,
)

logger = logging.getLogger(__name__)

Bindings = Dict[str, Term]


@dataclass(frozen=True)
class Substitution:
    """A finite map from variable names to terms; identity bindings are dropped."""

    bindings: Tuple[Tuple[str, Term], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Term]) -> "Substitution":
        items = []
        for name, value in mapping.items():
            if isinstance(value, Variable) and value.name == name:
                continue
            items.append((name, value))
        return cls(tuple(sorted(items, key=lambda item: item[0])))

    def as_dict(self) -> Dict[str, Term]:
        return dict(self.bindings)

    def domain(self) -> List[str]:
        return [name for name, _ in self.bindings]

    def get(self, name: str) -> Optional[Term]:
        for key, value in self.bindings:
            if key == name:
                return value
        return None

    def __len__(self) -> int:
        return len(self.bindings)

    def __str__(self) -> str:
        inner = ", ".join(f"{name}↦{value}" for name, value in self.bindings)
        return "{" + inner + "}"


EMPTY = Substitution()


def apply_term(theta: Union[Substitution, Mapping[str, Term]], term: Term) -> Term:
    mapping = theta.as_dict() if isinstance(theta, Substitution) else theta
    return _apply(mapping, term)


def _apply(mapping: Mapping[str, Term], term: Term) -> Term:
    if isinstance(term, Variable):
        return mapping.get(term.name, term)
    if not term.args:
        return term
    return Compound(term.functor, tuple(_apply(mapping, arg) for arg in term.args))


def _apply_atom(mapping: Mapping[str, Term], atom: Atom) -> Atom:
    return Atom(atom.predicate, tuple(_apply(mapping, arg) for arg in atom.args))


def apply_atom(theta: Union[Substitution, Mapping[str, Term]], atom: Atom) -> Atom:
    mapping = theta.as_dict() if isinstance(theta, Substitution) else theta
    return _apply_atom(mapping, atom)


def apply_clause(theta: Union[Substitution, Mapping[str, Term]], clause: Clause) -> Clause:
    mapping = theta.as_dict() if isinstance(theta, Substitution) else theta
    return Clause(
        _apply_atom(mapping, clause.head),
        frozenset(_apply_atom(mapping, atom) for atom in clause.body),
    )


def apply(theta: Substitution, item):
    """Apply a substitution simultaneously to a term, atom, clause or goal."""
    if isinstance(item, Clause):
        return apply_clause(theta, item)
    if isinstance(item, Atom):
        return apply_atom(theta, item)
    if isinstance(item, DefiniteGoal):
        mapping = theta.as_dict()
        return DefiniteGoal(frozenset(_apply_atom(mapping, atom) for atom in item.body))
    return apply_term(theta, item)


# --------------------------------------------------------------------------
# One-way matching
# --------------------------------------------------------------------------


def match_term(pattern: Term, target: Term, bindings: Bindings) -> Optional[Bindings]:
    """Extend bindings so that pattern instantiates to target, or return None."""
    if isinstance(pattern, Variable):
        bound = bindings.get(pattern.name)
        if bound is None:
            extended = dict(bindings)
            extended[pattern.name] = target
            return extended
        return bindings if bound == target else None
    if isinstance(target, Variable):
        return None
    if pattern.functor != target.functor or len(pattern.args) != len(target.args):
        return None
    for sub_pattern, sub_target in zip(pattern.args, target.args):
        result = match_term(sub_pattern, sub_target, bindings)
        if result is None:
            return None
        bindings = result
    return bindings


def match_atom(pattern: Atom, target: Atom, bindings: Bindings) -> Optional[Bindings]:
    if pattern.predicate != target.predicate or len(pattern.args) != len(target.args):
        return None
    for sub_pattern, sub_target in zip(pattern.args, target.args):
        result = match_term(sub_pattern, sub_target, bindings)
        if result is None:
            return None
        bindings = result
    return bindings


def enumerate_matchings(general: Clause, specific: Clause) -> Iterator[Bindings]:
    """
    Yield every binding set mapping general's head onto specific's head and each
    body literal of general into specific's body.
    """
    start = match_atom(general.head, specific.head, {})
    if start is None:
        return
    candidates: Dict[Tuple[str, int], List[Atom]] = {}
    for atom in sorted_atoms(specific.body):
        candidates.setdefault(atom.signature, []).append(atom)

    literals = sorted_atoms(general.body)
    if any(atom.signature not in candidates for atom in literals):
        return
    # most constrained literal first: fewest candidates, then canonical order
    literals.sort(key=lambda atom: (len(candidates[atom.signature]), atom.sort_key()))

    def search(index: int, bindings: Bindings) -> Iterator[Bindings]:
        if index == len(literals):
            yield bindings
            return
        literal = literals[index]
        for candidate in candidates[literal.signature]:
            extended = match_atom(literal, candidate, bindings)
            if extended is not None:
                yield from search(index + 1, extended)

    yield from search(0, start)


def clause_subsumes(general: Clause, specific: Clause) -> Optional[Substitution]:
    """
    Decide theta-subsumption general ⪰ specific.

    Returns:
        A substitution theta over vars(general) with general.head theta equal to
        specific.head and general.body theta a subset of specific.body, or None
    """
    for bindings in enumerate_matchings(general, specific):
        return Substitution.from_mapping(bindings)
    return None


def theory_subsumes(
    general: Iterable[Clause], specific: Iterable[Clause]
) -> Optional[Dict[Clause, Tuple[Clause, Substitution]]]:
    """
    Decide theory subsumption S ⪰ T.

    Returns:
        Map from each clause of T to a subsuming clause of S and its witness,
        or None when some clause of T is not subsumed
    """
    general_clauses = list(general)
    witnesses: Dict[Clause, Tuple[Clause, Substitution]] = {}
    for target in specific:
        for candidate in general_clauses:
            theta = clause_subsumes(candidate, target)
            if theta is not None:
                witnesses[target] = (candidate, theta)
                break
        else:
            logger.debug(f"No clause subsumes {target}")
            return None
    return witnesses


def is_instance(general: Clause, ground: Clause) -> Optional[Substitution]:
    """
    Decide whether a ground clause is exactly an instance of a clause.

    Raises:
        NonGroundError: If the target clause is not ground
    """
    if not ground.is_ground():
        raise NonGroundError(f"Instance check needs a ground clause, got '{ground}'")
    general_vars = {var.name for var in general.variables()}
    for bindings in enumerate_matchings(general, ground):
        if not general_vars.issubset(bindings):
            continue
        if apply_clause(bindings, general) == ground:
            return Substitution.from_mapping(bindings)
    return None


# --------------------------------------------------------------------------
# Anti-subsumption
# --------------------------------------------------------------------------

# (atom index, argument path) locating a constant occurrence inside a clause
Position = Tuple[int, Tuple[int, ...]]


def _constant_positions(atoms: Sequence[Atom]) -> Dict[Compound, List[Position]]:
    positions: Dict[Compound, List[Position]] = {}

    def walk(term: Term, index: int, path: Tuple[int, ...]) -> None:
        if isinstance(term, Variable):
            return
        if not term.args:
            positions.setdefault(term, []).append((index, path))
            return
        for offset, arg in enumerate(term.args):
            walk(arg, index, path + (offset,))

    for index, atom in enumerate(atoms):
        for offset, arg in enumerate(atom.args):
            walk(arg, index, (offset,))
    return dict(sorted(positions.items(), key=lambda item: term_sort_key(item[0])))


def _replace(term: Term, path: Tuple[int, ...], value: Term) -> Term:
    if not path:
        return value
    assert isinstance(term, Compound)
    args = list(term.args)
    args[path[0]] = _replace(args[path[0]], path[1:], value)
    return Compound(term.functor, tuple(args))


def _partitions_with_blocks(length: int, blocks: int) -> Iterator[Tuple[int, ...]]:
    def grow(prefix: Tuple[int, ...], top: int) -> Iterator[Tuple[int, ...]]:
        remaining = length - len(prefix)
        if remaining == 0:
            if top + 1 == blocks:
                yield prefix
            return
        if blocks - (top + 1) > remaining:
            return
        for label in range(min(top + 2, blocks)):
            yield from grow(prefix + (label,), max(top, label))

    yield from grow((0,), 0)


def _restricted_growth(length: int) -> Iterator[Tuple[int, ...]]:
    """Set partitions of range(length) as restricted growth strings, fewest blocks first."""
    if length == 0:
        yield ()
        return
    for blocks in range(1, length + 1):
        yield from _partitions_with_blocks(length, blocks)


def _labelings(count: int) -> Iterator[Tuple[Optional[int], ...]]:
    """
    Per-occurrence labels for one constant: None keeps the constant, an integer
    names the variable block. Coarser labelings come first.
    """
    for kept_count in range(count + 1):
        for kept in itertools.combinations(range(count), kept_count):
            free = [i for i in range(count) if i not in kept]
            for partition in _restricted_growth(len(free)):
                labels: List[Optional[int]] = [None] * count
                for slot, block in zip(free, partition):
                    labels[slot] = block
                yield tuple(labels)


def _lazy_product(factories: Sequence[Callable[[], Iterator]]) -> Iterator[tuple]:
    if not factories:
        yield ()
        return
    for head in factories[0]():
        for tail in _lazy_product(factories[1:]):
            yield (head, *tail)


def _variabilize(
    atoms: Sequence[Atom],
    positions: Dict[Compound, List[Position]],
    choice: Dict[Compound, Tuple[Optional[int], ...]],
) -> List[Atom]:
    result = list(atoms)
    names: Dict[Tuple[int, int], Variable] = {}
    for const_index, (const, occurrences) in enumerate(positions.items()):
        labels = choice.get(const)
        if labels is None:
            continue
        for (atom_index, path), label in zip(occurrences, labels):
            if label is None:
                continue
            var = names.setdefault((const_index, label), Variable(f"X{len(names)}"))
            atom = result[atom_index]
            args = list(atom.args)
            args[path[0]] = _replace(args[path[0]], path[1:], var)
            result[atom_index] = Atom(atom.predicate, tuple(args))
    return result


def _body_subsets(clause: Clause) -> Iterator[Clause]:
    body = clause.ordered_body()
    for size in range(len(body)):
        for subset in itertools.combinations(body, size):
            yield Clause(clause.head, frozenset(subset))


def _stage_inverse_substitutions(
    atoms: Sequence[Atom], positions: Dict[Compound, List[Position]]
) -> Iterator[Clause]:
    consts = list(positions)
    for size in range(len(consts), -1, -1):
        for chosen in itertools.combinations(consts, size):
            choice = {const: tuple(0 for _ in positions[const]) for const in chosen}
            varied = _variabilize(atoms, positions, choice)
            yield Clause(varied[0], frozenset(varied[1:]))


def _stage_refinements(
    atoms: Sequence[Atom], positions: Dict[Compound, List[Position]]
) -> Iterator[Clause]:
    consts = list(positions)
    factories = [partial(_labelings, len(positions[const])) for const in consts]
    for combo in _lazy_product(factories):
        varied = _variabilize(atoms, positions, dict(zip(consts, combo)))
        yield Clause(varied[0], frozenset(varied[1:]))


def generalize_clause(ground: Clause, budget: int) -> Iterator[Clause]:
    """
    Enumerate generalizations of a ground clause under theta-subsumption.

    Order: whole-constant inverse substitutions over the full body (more
    constants replaced first), then body-subset variants of those, then
    occurrence-partition refinements with their body subsets. Variants are
    emitted once; every emitted clause subsumes the input.

    Raises:
        NonGroundError: If the clause is not ground
    """
    if not ground.is_ground():
        raise NonGroundError(f"Only ground clauses are generalized, got '{ground}'")
    if budget <= 0:
        return
    atoms = [ground.head, *ground.ordered_body()]
    positions = _constant_positions(atoms)
    emitted = VariantSet()

    def fresh(candidates: Iterable[Clause]) -> Iterator[Clause]:
        for candidate in candidates:
            if emitted.add(candidate):
                yield candidate

    stream = itertools.chain(
        fresh(_stage_inverse_substitutions(atoms, positions)),
        fresh(
            subset
            for clause in _stage_inverse_substitutions(atoms, positions)
            for subset in _body_subsets(clause)
        ),
        fresh(
            variant
            for refined in _stage_refinements(atoms, positions)
            for variant in itertools.chain([refined], _body_subsets(refined))
        ),
    )
    yield from itertools.islice(stream, budget)
