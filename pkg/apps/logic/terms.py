"""
First-order syntax for definite programs.

Terms, atoms, definite clauses, definite goals, theories and open programs are
immutable values. Clause bodies are sets; a Theory has set semantics up to
variable renaming (canonical names V0, V1, ... in order of first occurrence).
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from apps.core.exceptions import EmptyUniverseError, InfiniteUniverseError

logger = logging.getLogger(__name__)

# Upper bound on body orderings tried when canonicalizing symmetric bodies;
# beyond it variance is decided by matching instead of by key
MAX_CANONICAL_ORDERINGS = 5040


@dataclass(frozen=True)
class Variable:
    """A logical variable."""

    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("Variable name must be nonempty")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Compound:
    """A function application; a constant is a Compound with no arguments."""

    functor: str
    args: Tuple["Term", ...] = ()

    def __post_init__(self) -> None:
        if not self.functor:
            raise ValueError("Functor name must be nonempty")

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_constant(self) -> bool:
        return not self.args

    def __str__(self) -> str:
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(str(arg) for arg in self.args)})"


Term = Union[Variable, Compound]


def constant(name: str) -> Compound:
    """Build a constant term."""
    return Compound(name)


def term_sort_key(term: Term) -> tuple:
    """Total order on terms: variables before compounds, then by name and arguments."""
    if isinstance(term, Variable):
        return (0, term.name)
    return (1, term.functor, len(term.args), tuple(term_sort_key(arg) for arg in term.args))


def term_size(term: Term) -> int:
    if isinstance(term, Variable):
        return 1
    return 1 + sum(term_size(arg) for arg in term.args)


def term_depth(term: Term) -> int:
    """Nesting depth: 0 for variables and constants, 1 + max(args) otherwise."""
    if isinstance(term, Variable) or not term.args:
        return 0
    return 1 + max(term_depth(arg) for arg in term.args)


def term_is_ground(term: Term) -> bool:
    if isinstance(term, Variable):
        return False
    return all(term_is_ground(arg) for arg in term.args)


def term_variables(term: Term) -> Iterator[Variable]:
    """Yield variables left to right, repeats included."""
    if isinstance(term, Variable):
        yield term
    else:
        for arg in term.args:
            yield from term_variables(arg)


def _shape_key(term: Term) -> tuple:
    if isinstance(term, Variable):
        return (0, "")
    return (1, term.functor, len(term.args), tuple(_shape_key(arg) for arg in term.args))


@dataclass(frozen=True)
class Atom:
    """An atomic formula p(t1, ..., tn)."""

    predicate: str
    args: Tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        if not self.predicate:
            raise ValueError("Predicate name must be nonempty")

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> Tuple[str, int]:
        return (self.predicate, len(self.args))

    def is_ground(self) -> bool:
        return all(term_is_ground(arg) for arg in self.args)

    def variables(self) -> Iterator[Variable]:
        for arg in self.args:
            yield from term_variables(arg)

    def size(self) -> int:
        return sum(term_size(arg) for arg in self.args)

    def depth(self) -> int:
        return max((term_depth(arg) for arg in self.args), default=0)

    def sort_key(self) -> tuple:
        """Order by predicate, then arity, then term size, then canonical term order."""
        return (
            self.predicate,
            len(self.args),
            self.size(),
            tuple(term_sort_key(arg) for arg in self.args),
        )

    def shape_key(self) -> tuple:
        return (self.predicate, len(self.args), tuple(_shape_key(arg) for arg in self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(arg) for arg in self.args)})"


def atom_sort_key(atom: Atom) -> tuple:
    return atom.sort_key()


def sorted_atoms(atoms: Iterable[Atom]) -> List[Atom]:
    return sorted(atoms, key=atom_sort_key)


@dataclass(frozen=True)
class Clause:
    """A definite clause head <- body; a fact when the body is empty."""

    head: Atom
    body: FrozenSet[Atom] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not isinstance(self.body, frozenset):
            object.__setattr__(self, "body", frozenset(self.body))

    def is_fact(self) -> bool:
        return not self.body

    def is_ground(self) -> bool:
        return self.head.is_ground() and all(atom.is_ground() for atom in self.body)

    def ordered_body(self) -> List[Atom]:
        return sorted_atoms(self.body)

    def variables(self) -> List[Variable]:
        """Distinct variables in order of first occurrence (head, then ordered body)."""
        seen: Dict[Variable, None] = {}
        for atom in (self.head, *self.ordered_body()):
            for var in atom.variables():
                seen.setdefault(var, None)
        return list(seen)

    def sort_key(self) -> tuple:
        body = tuple(atom.sort_key() for atom in self.ordered_body())
        return (self.head.sort_key(), len(self.body), body)

    @cached_property
    def variant_exact(self) -> bool:
        """Whether equal variant keys alone prove two clauses variants."""
        return self.is_ground() or _ordering_count(_shape_groups(self)) <= MAX_CANONICAL_ORDERINGS

    @cached_property
    def variant_key(self) -> str:
        """
        Rendering of the canonical form; equal for clauses equal up to renaming.

        Bodies with too many interchangeable literals get a coarser key that
        still never separates variants; is_variant then matches the clauses.
        """
        if self.variant_exact:
            return _render_clause(canonical_form(self))
        return _coarse_variant_key(self)

    def __str__(self) -> str:
        return _render_clause(self)


def _render_clause(clause: Clause) -> str:
    if not clause.body:
        return f"{clause.head}."
    return f"{clause.head} :- {', '.join(str(atom) for atom in clause.ordered_body())}."


def clause_head(clause: Clause) -> Atom:
    """Return C+, the head atom of a clause."""
    return clause.head


def clause_body(clause: Clause) -> FrozenSet[Atom]:
    """Return C-, the body atom set of a clause."""
    return clause.body


@dataclass(frozen=True)
class DefiniteGoal:
    """A headless clause <- L1, ..., Ln used as an integrity constraint."""

    body: FrozenSet[Atom]

    def __post_init__(self) -> None:
        if not isinstance(self.body, frozenset):
            object.__setattr__(self, "body", frozenset(self.body))
        if not self.body:
            raise ValueError("A definite goal needs a nonempty body")

    def ordered_body(self) -> List[Atom]:
        return sorted_atoms(self.body)

    def __str__(self) -> str:
        return f":- {', '.join(str(atom) for atom in self.ordered_body())}."


class VariantSet:
    """Clauses collected up to variable renaming, bucketed by variant key."""

    __slots__ = ("_buckets",)

    def __init__(self) -> None:
        self._buckets: Dict[str, List[Clause]] = {}

    def __contains__(self, clause: object) -> bool:
        if not isinstance(clause, Clause):
            return False
        bucket = self._buckets.get(clause.variant_key)
        if not bucket:
            return False
        return clause.variant_exact or any(is_variant(kept, clause) for kept in bucket)

    def add(self, clause: Clause) -> bool:
        """Add a clause; False if a variant of it is already present."""
        if clause in self:
            return False
        self._buckets.setdefault(clause.variant_key, []).append(clause)
        return True

    def keys(self) -> FrozenSet[str]:
        return frozenset(self._buckets)


class Theory:
    """
    A finite set of definite clauses.

    Clauses equal up to variable renaming collapse to the first occurrence;
    iteration follows insertion order so results stay deterministic.
    """

    __slots__ = ("_clauses", "_index", "_keys")

    def __init__(self, clauses: Iterable[Clause] = ()):
        index = VariantSet()
        kept: List[Clause] = []
        for clause in clauses:
            if index.add(clause):
                kept.append(clause)
        self._clauses: Tuple[Clause, ...] = tuple(kept)
        self._index = index
        self._keys: FrozenSet[str] = index.keys()

    @classmethod
    def facts(cls, atoms: Iterable[Atom]) -> "Theory":
        return cls(Clause(atom) for atom in sorted_atoms(atoms))

    @property
    def clauses(self) -> Tuple[Clause, ...]:
        return self._clauses

    def sorted(self) -> "Theory":
        return Theory(sorted(self._clauses, key=lambda c: c.sort_key()))

    def union(self, *others: "Theory") -> "Theory":
        return Theory(itertools.chain(self._clauses, *(other.clauses for other in others)))

    def __or__(self, other: "Theory") -> "Theory":
        return self.union(other)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self._clauses)

    def __len__(self) -> int:
        return len(self._clauses)

    def __bool__(self) -> bool:
        return bool(self._clauses)

    def __contains__(self, clause: object) -> bool:
        return clause in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Theory):
            return NotImplemented
        if len(self) != len(other) or self._keys != other._keys:
            return False
        return all(clause in other._index for clause in self._clauses)

    def __hash__(self) -> int:
        return hash(self._keys)

    def __repr__(self) -> str:
        return f"Theory({[str(c) for c in self._clauses]})"

    def is_ground(self) -> bool:
        return all(clause.is_ground() for clause in self._clauses)


def theory_heads(theory: Iterable[Clause]) -> FrozenSet[Atom]:
    """Return Sigma+, the set of clause heads."""
    return frozenset(clause.head for clause in theory)


def theory_bodies(theory: Iterable[Clause]) -> FrozenSet[Atom]:
    """Return Sigma-, the union of clause bodies."""
    return frozenset(atom for clause in theory for atom in clause.body)


@dataclass(frozen=True)
class OpenProgram:
    """A definite open program <B, U, I>."""

    background: Theory
    abducibles: FrozenSet[Tuple[str, int]] = frozenset()
    constraints: Tuple[DefiniteGoal, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "abducibles", frozenset(self.abducibles))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for name, arity in self.abducibles:
            if not name or arity < 0:
                raise ValueError(f"Malformed abducible signature {name}/{arity}")

    def is_abducible(self, atom: Atom) -> bool:
        return atom.signature in self.abducibles


# --------------------------------------------------------------------------
# Renaming and canonical form
# --------------------------------------------------------------------------


def rename_term(term: Term, mapping: Dict[Variable, Variable]) -> Term:
    if isinstance(term, Variable):
        return mapping.get(term, term)
    if not term.args:
        return term
    return Compound(term.functor, tuple(rename_term(arg, mapping) for arg in term.args))


def rename_atom(atom: Atom, mapping: Dict[Variable, Variable]) -> Atom:
    return Atom(atom.predicate, tuple(rename_term(arg, mapping) for arg in atom.args))


def rename_clause(clause: Clause, mapping: Dict[Variable, Variable]) -> Clause:
    return Clause(
        rename_atom(clause.head, mapping),
        frozenset(rename_atom(atom, mapping) for atom in clause.body),
    )


def _first_occurrence_renaming(atoms: Sequence[Atom], prefix: str) -> Dict[Variable, Variable]:
    mapping: Dict[Variable, Variable] = {}
    for atom in atoms:
        for var in atom.variables():
            if var not in mapping:
                mapping[var] = Variable(f"{prefix}{len(mapping)}")
    return mapping


def _shape_groups(clause: Clause) -> List[List[Atom]]:
    body = sorted(clause.body, key=lambda atom: (atom.shape_key(), atom.sort_key()))
    return [list(g) for _, g in itertools.groupby(body, key=lambda atom: atom.shape_key())]


def _ordering_count(groups: List[List[Atom]]) -> int:
    count = 1
    for group in groups:
        count *= math.factorial(len(group))
    return count


def _tie_orderings(groups: List[List[Atom]]) -> Iterator[List[Atom]]:
    if _ordering_count(groups) > MAX_CANONICAL_ORDERINGS:
        yield [atom for group in groups for atom in group]
        return
    for combo in itertools.product(*(itertools.permutations(group) for group in groups)):
        yield [atom for group in combo for atom in group]


def canonical_form(clause: Clause, prefix: str = "V") -> Clause:
    """
    Rename variables to V0, V1, ... so that variants share one representative.

    Only canonical when clause.variant_exact holds; otherwise one fixed
    ordering of the interchangeable body literals is renamed.
    """
    if not any(True for _ in clause.head.variables()) and all(a.is_ground() for a in clause.body):
        return clause
    groups = _shape_groups(clause)
    best: Optional[Clause] = None
    best_key: Optional[str] = None
    for ordering in _tie_orderings(groups):
        mapping = _first_occurrence_renaming([clause.head, *ordering], prefix)
        candidate = rename_clause(clause, mapping)
        key = _render_clause(candidate)
        if best_key is None or key < best_key:
            best, best_key = candidate, key
    assert best is not None
    return best


def _coarse_variant_key(clause: Clause) -> str:
    head = rename_atom(clause.head, _first_occurrence_renaming([clause.head], "V"))
    shapes = sorted(repr(atom.shape_key()) for atom in clause.body)
    return f"~{head} :- {' ; '.join(shapes)} / {len(clause.variables())}"


def _renames_onto(first: Clause, second: Clause) -> bool:
    """Search a one-to-one variable renaming taking first onto second."""
    from .subsumption import enumerate_matchings

    if len(first.body) != len(second.body):
        return False
    for bindings in enumerate_matchings(first, second):
        targets = list(bindings.values())
        if all(isinstance(t, Variable) for t in targets) and len(set(targets)) == len(targets):
            return True
    return False


def is_variant(first: Clause, second: Clause) -> bool:
    """Decide whether two clauses are equal up to a one-to-one variable renaming."""
    if first.variant_key != second.variant_key:
        return False
    return first.variant_exact or _renames_onto(first, second)


# --------------------------------------------------------------------------
# Signature, Herbrand universe and grounding
# --------------------------------------------------------------------------


def _collect_symbols(term: Term, constants: set, functors: set) -> None:
    if isinstance(term, Variable):
        return
    if not term.args:
        constants.add(term)
        return
    functors.add((term.functor, len(term.args)))
    for arg in term.args:
        _collect_symbols(arg, constants, functors)


Expression = Union[Term, Atom, Clause, DefiniteGoal, Theory, OpenProgram]


def _atoms_of(item: Expression) -> Iterator[Atom]:
    if isinstance(item, Atom):
        yield item
    elif isinstance(item, Clause):
        yield item.head
        yield from item.body
    elif isinstance(item, DefiniteGoal):
        yield from item.body
    elif isinstance(item, Theory):
        for clause in item:
            yield from _atoms_of(clause)
    elif isinstance(item, OpenProgram):
        yield from _atoms_of(item.background)
        for goal in item.constraints:
            yield from goal.body


def signature_of(*items: Expression) -> Tuple[List[Compound], List[Tuple[str, int]]]:
    """Return the sorted constants and non-constant functors occurring in the items."""
    constants: set = set()
    functors: set = set()
    for item in items:
        if isinstance(item, (Variable, Compound)):
            _collect_symbols(item, constants, functors)
            continue
        for atom in _atoms_of(item):
            for arg in atom.args:
                _collect_symbols(arg, constants, functors)
    return sorted(constants, key=term_sort_key), sorted(functors)


def herbrand_universe(
    constants: Iterable[Compound],
    functors: Iterable[Tuple[str, int]] = (),
    depth_bound: Optional[int] = None,
) -> Tuple[Compound, ...]:
    """
    Build the (possibly truncated) Herbrand universe.

    Args:
        constants: Constant symbols of the signature
        functors: (name, arity) pairs of non-constant function symbols
        depth_bound: Maximal term depth admitted when functors are present

    Returns:
        Universe terms in canonical order

    Raises:
        InfiniteUniverseError: If functors are present and no depth bound is given
    """
    level = sorted(set(constants), key=term_sort_key)
    functor_list = sorted(set(functors))
    if not functor_list:
        return tuple(level)
    if depth_bound is None:
        names = ", ".join(f"{name}/{arity}" for name, arity in functor_list)
        raise InfiniteUniverseError(
            f"Function symbols {names} make the Herbrand universe infinite; set a depth bound"
        )
    terms = set(level)
    for _ in range(depth_bound):
        current = sorted(terms, key=term_sort_key)
        for name, arity in functor_list:
            for args in itertools.product(current, repeat=arity):
                terms.add(Compound(name, tuple(args)))
    return tuple(sorted(terms, key=term_sort_key))


def universe_for(*items: Expression, depth_bound: Optional[int] = None) -> Tuple[Compound, ...]:
    constants, functors = signature_of(*items)
    return herbrand_universe(constants, functors, depth_bound)


def ground_instances(clause: Clause, universe: Sequence[Term]) -> List[Clause]:
    """
    Enumerate all ground instances of a clause over a finite universe.

    Raises:
        EmptyUniverseError: If the clause has variables and the universe is empty
    """
    from .subsumption import Substitution, apply_clause

    variables = clause.variables()
    if not variables:
        return [clause]
    if not universe:
        raise EmptyUniverseError(f"Cannot ground '{clause}' over an empty universe")
    seen: Dict[Clause, None] = {}
    for values in itertools.product(universe, repeat=len(variables)):
        theta = Substitution.from_mapping(dict(zip((v.name for v in variables), values)))
        seen.setdefault(apply_clause(theta, clause), None)
    return list(seen)
