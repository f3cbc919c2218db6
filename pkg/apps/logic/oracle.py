"""
Brute-force reference implementations for cross-checking the engine.

Both oracles work from definitions only: the minimal model is the intersection
of all Herbrand models, and subsumption is tried for every map from variables
to subterms. They reuse the term data model and nothing else.
"""

from __future__ import annotations

import itertools
import logging
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from apps.core.exceptions import OracleBoundsError

from .subsumption import Substitution
from .terms import Atom, Clause, Compound, Term, Variable

logger = logging.getLogger(__name__)

MAX_BASE_ATOMS = 16
MAX_CLAUSE_VARIABLES = 4
MAX_SUBTERMS = 8


def _term_key(term: Term) -> tuple:
    if isinstance(term, Variable):
        return (0, term.name)
    return (1, term.functor, len(term.args), tuple(_term_key(arg) for arg in term.args))


def _substitute(term: Term, mapping: Dict[Variable, Term]) -> Term:
    if isinstance(term, Variable):
        return mapping.get(term, term)
    return Compound(term.functor, tuple(_substitute(arg, mapping) for arg in term.args))


def _instance(atom: Atom, mapping: Dict[Variable, Term]) -> Atom:
    return Atom(atom.predicate, tuple(_substitute(arg, mapping) for arg in atom.args))


def _walk(term: Term) -> Iterator[Term]:
    yield term
    if isinstance(term, Compound):
        for arg in term.args:
            yield from _walk(arg)


def _clause_atoms(clause: Clause) -> List[Atom]:
    return [clause.head, *clause.body]


def _clause_variables(clause: Clause) -> List[Variable]:
    found: Set[Variable] = set()
    for atom in _clause_atoms(clause):
        for arg in atom.args:
            found.update(t for t in _walk(arg) if isinstance(t, Variable))
    return sorted(found, key=lambda var: var.name)


def _domain(
    clauses: List[Clause], extra: Iterable[Atom], depth_bound: Optional[int]
) -> Tuple[List[Term], Set[Tuple[str, int]]]:
    constants: Set[Term] = set()
    functors: Set[Tuple[str, int]] = set()
    for atom in itertools.chain((a for c in clauses for a in _clause_atoms(c)), extra):
        for arg in atom.args:
            for sub in _walk(arg):
                if isinstance(sub, Compound):
                    if sub.args:
                        functors.add((sub.functor, len(sub.args)))
                    else:
                        constants.add(sub)
    if functors and depth_bound is None:
        raise OracleBoundsError("Function symbols need a depth bound for the oracle")
    terms = set(constants)
    for _ in range(depth_bound or 0):
        grown = set(terms)
        for name, arity in sorted(functors):
            for args in itertools.product(sorted(terms, key=_term_key), repeat=arity):
                grown.add(Compound(name, tuple(args)))
        terms = grown
    predicates = {a.signature for c in clauses for a in _clause_atoms(c)}
    predicates.update(a.signature for a in extra)
    return sorted(terms, key=_term_key), predicates


def brute_minimal_model(
    theory: Iterable[Clause],
    *,
    depth_bound: Optional[int] = None,
    extra: Iterable[Atom] = (),
) -> FrozenSet[Atom]:
    """
    Intersect every Herbrand model of a definite theory.

    Atoms deeper than the bound are outside the base, so rule instances with
    such a head never fire.

    Raises:
        OracleBoundsError: If the Herbrand base exceeds MAX_BASE_ATOMS
    """
    clauses = list(theory)
    extra_atoms = list(extra)
    universe, predicates = _domain(clauses, extra_atoms, depth_bound)
    base = sorted(
        (
            Atom(name, tuple(args))
            for name, arity in predicates
            for args in itertools.product(universe, repeat=arity)
        ),
        key=lambda atom: (atom.predicate, tuple(_term_key(arg) for arg in atom.args)),
    )
    if len(base) > MAX_BASE_ATOMS:
        raise OracleBoundsError(
            f"Herbrand base has {len(base)} atoms; the oracle handles at most {MAX_BASE_ATOMS}"
        )
    base_set = set(base)

    rules: List[Tuple[Atom, FrozenSet[Atom]]] = []
    for clause in clauses:
        variables = _clause_variables(clause)
        for values in itertools.product(universe, repeat=len(variables)):
            mapping = dict(zip(variables, values))
            head = _instance(clause.head, mapping)
            if head not in base_set:
                continue
            body = frozenset(_instance(atom, mapping) for atom in clause.body)
            if body <= base_set:
                rules.append((head, body))

    model: Optional[FrozenSet[Atom]] = None
    for mask in range(1 << len(base)):
        candidate = frozenset(atom for bit, atom in enumerate(base) if mask >> bit & 1)
        if all(head in candidate for head, body in rules if body <= candidate):
            model = candidate if model is None else model & candidate
    logger.debug(f"Oracle checked {1 << len(base)} interpretations against {len(rules)} rules")
    return model if model is not None else frozenset()


def brute_subsumes(general: Clause, specific: Clause) -> Optional[Substitution]:
    """
    Try every map from the variables of ``general`` to subterms of ``specific``.

    Raises:
        OracleBoundsError: If ``general`` has more than four variables or
            ``specific`` more than eight distinct subterms
    """
    variables = _clause_variables(general)
    if len(variables) > MAX_CLAUSE_VARIABLES:
        raise OracleBoundsError(
            f"Clause has {len(variables)} variables; the oracle handles {MAX_CLAUSE_VARIABLES}"
        )
    subterms = sorted(
        {sub for atom in _clause_atoms(specific) for arg in atom.args for sub in _walk(arg)},
        key=_term_key,
    )
    if len(subterms) > MAX_SUBTERMS:
        raise OracleBoundsError(
            f"Clause has {len(subterms)} subterms; the oracle handles {MAX_SUBTERMS}"
        )
    for values in itertools.product(subterms, repeat=len(variables)):
        mapping = dict(zip(variables, values))
        if _instance(general.head, mapping) != specific.head:
            continue
        if all(_instance(atom, mapping) in specific.body for atom in general.body):
            return Substitution.from_mapping({var.name: value for var, value in mapping.items()})
    return None


def herbrand_base_size(theory: Iterable[Clause], *, depth_bound: Optional[int] = None) -> int:
    """Size of the Herbrand base the oracle would enumerate."""
    clauses = list(theory)
    universe, predicates = _domain(clauses, (), depth_bound)
    return sum(len(universe) ** arity for _, arity in predicates)
