"""
Derivability relations and hypothesis search.

CTG holds when a connected theory T for <B, U, I> and e is entailed clause-wise
by H; CTIS holds when every clause of T is theta-subsumed by a clause of H. Both
are checked on the connected theory built from a ground support of e in B ∪ H.
``induce`` runs the relation backwards: it enumerates small connected theories
over abducible predicates and generalizes them into candidate hypotheses.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field

from apps.core.exceptions import (
    InductionError,
    LayeredTheoryError,
    NonGroundError,
    NotEntailedError,
    PreconditionError,
)

from .connected import (
    LayeredTheory,
    VerificationReport,
    assign_layers,
    build_connected_theory,
    verify_connected_theory,
)
from .entailment import constraint_violations, entails_atom, entails_ground_clause, least_model
from .subsumption import (
    Substitution,
    clause_subsumes,
    generalize_clause,
    theory_subsumes,
)
from .terms import (
    Atom,
    Clause,
    OpenProgram,
    Theory,
    sorted_atoms,
    universe_for,
)

logger = logging.getLogger(__name__)

# Generalizations scanned per clause while filtering by variable count
MAX_GENERALIZATIONS_SCANNED = 4096


class SearchConfig(BaseModel):
    """Bounds for ``induce``."""

    model_config = ConfigDict(frozen=True)

    generalization_budget: int = Field(default=8, ge=1)
    max_candidates: int = Field(default=10, ge=1)
    max_clause_vars: int = Field(default=2, ge=0)
    max_theory_clauses: int = Field(default=2, ge=1)
    max_body_literals: int = Field(default=2, ge=0)


@dataclass
class CtisWitness:
    """A constructed connected theory with its CTIS and CTG evidence."""

    theory: LayeredTheory
    report: VerificationReport
    subsumption_map: Dict[Clause, Tuple[Clause, Substitution]] = field(default_factory=dict)
    entailment_flags: Dict[Clause, bool] = field(default_factory=dict)
    instance_map: Dict[Clause, Tuple[Clause, Substitution]] = field(default_factory=dict)
    missing: List[Clause] = field(default_factory=list)

    @property
    def ctis_holds(self) -> bool:
        """Every clause of T is subsumed by H and T is connected."""
        covered = all(clause in self.subsumption_map for clause in self.theory.union())
        return self.report.connected and covered and not self.missing

    @property
    def ctg_holds(self) -> bool:
        """H entails every clause of T and T is connected."""
        flagged = all(self.entailment_flags.get(c, False) for c in self.theory.union())
        return self.report.connected and flagged

    def to_dict(self) -> Dict[str, object]:
        def pairs(mapping: Dict[Clause, Tuple[Clause, Substitution]]) -> List[Dict[str, str]]:
            return [
                {"clause": str(target), "by": str(source), "theta": str(theta)}
                for target, (source, theta) in sorted(
                    mapping.items(), key=lambda item: item[0].sort_key()
                )
            ]

        return {
            "layers": [[str(c) for c in layer.sorted()] for layer in self.theory.layers],
            "report": self.report.to_dict(),
            "subsumption_map": pairs(self.subsumption_map),
            "instance_map": pairs(self.instance_map),
            "entailment_flags": [
                {"clause": str(clause), "entailed": flag}
                for clause, flag in sorted(
                    self.entailment_flags.items(), key=lambda item: item[0].sort_key()
                )
            ],
            "missing": [str(clause) for clause in self.missing],
            "ctis": self.ctis_holds,
            "ctg": self.ctg_holds,
        }


def check_inductive_solution(
    program: OpenProgram,
    example: Atom,
    hypothesis: Theory,
    *,
    depth_bound: Optional[int] = None,
) -> bool:
    """Decide whether B ∪ H ⊨ e and B ∪ H ∪ I is consistent."""
    combined = program.background.union(hypothesis)
    if not entails_atom(combined, example, depth_bound=depth_bound):
        return False
    return not constraint_violations(
        program.background, hypothesis, program.constraints, depth_bound=depth_bound
    )


def _require_solution(
    program: OpenProgram, example: Atom, hypothesis: Theory, depth_bound: Optional[int]
) -> None:
    if not example.is_ground():
        raise NonGroundError(f"Example must be ground, got '{example}'")
    combined = program.background.union(hypothesis)
    if not entails_atom(combined, example, depth_bound=depth_bound):
        raise NotEntailedError(
            f"H is not an inductive solution: B ∪ H does not entail '{example}'"
        )
    violations = constraint_violations(
        program.background, hypothesis, program.constraints, depth_bound=depth_bound
    )
    if violations:
        goal, _ = violations[0]
        raise PreconditionError(f"H is not an inductive solution: {goal} is violated")


def _entailment_flags(
    hypothesis: Theory, layered: LayeredTheory, depth_bound: Optional[int]
) -> Dict[Clause, bool]:
    return {
        clause: entails_ground_clause(hypothesis, clause, depth_bound=depth_bound)
        for clause in layered.union()
    }


def derive_ctg(
    program: OpenProgram,
    example: Atom,
    hypothesis: Theory,
    *,
    layered: Optional[LayeredTheory] = None,
    depth_bound: Optional[int] = None,
) -> CtisWitness:
    """
    Check derivability by connected theory generalization.

    Args:
        layered: A hand-supplied connected theory; built from H when omitted

    Raises:
        PreconditionError: If H is not an inductive solution for <B, U, I> and e
    """
    _require_solution(program, example, hypothesis, depth_bound)
    if layered is None:
        layered = build_connected_theory(
            program, hypothesis, example, depth_bound=depth_bound
        ).layered
    report = verify_connected_theory(program, example, layered, depth_bound=depth_bound)
    witness = CtisWitness(
        theory=layered,
        report=report,
        entailment_flags=_entailment_flags(hypothesis, layered, depth_bound),
    )
    logger.debug(f"CTG for {example}: {witness.ctg_holds}")
    return witness


def verify_ctis(
    program: OpenProgram,
    example: Atom,
    hypothesis: Theory,
    *,
    depth_bound: Optional[int] = None,
) -> CtisWitness:
    """
    Build T = S ∩ ground(H) and find a subsuming clause of H for each clause of T.

    A clause of T left without a subsumer is listed in ``missing``; callers treat
    it as a violation of the subsumption property, not as an input error.

    Raises:
        PreconditionError: If H is not an inductive solution for <B, U, I> and e
    """
    _require_solution(program, example, hypothesis, depth_bound)
    construction = build_connected_theory(program, hypothesis, example, depth_bound=depth_bound)
    layered = construction.layered
    report = verify_connected_theory(program, example, layered, depth_bound=depth_bound)
    clauses = layered.union()

    witnesses = theory_subsumes(hypothesis, clauses)
    missing: List[Clause] = []
    if witnesses is None:
        witnesses = {}
        for target in clauses:
            for candidate in hypothesis:
                theta = clause_subsumes(candidate, target)
                if theta is not None:
                    witnesses[target] = (candidate, theta)
                    break
            else:
                missing.append(target)
        logger.warning(f"{len(missing)} clause(s) of T have no subsumer in H for {example}")

    return CtisWitness(
        theory=layered,
        report=report,
        subsumption_map=witnesses,
        entailment_flags=_entailment_flags(hypothesis, layered, depth_bound),
        instance_map={c: (h, theta) for c, (h, theta) in construction.instances.items()},
        missing=missing,
    )


# --------------------------------------------------------------------------
# Hypothesis search
# --------------------------------------------------------------------------


def _reachable_signatures(program: OpenProgram) -> Set[Tuple[str, int]]:
    reachable = set(program.abducibles)
    changed = True
    while changed:
        changed = False
        for clause in program.background:
            if clause.head.signature in reachable:
                continue
            if any(atom.signature in reachable for atom in clause.body):
                reachable.add(clause.head.signature)
                changed = True
    return reachable


def _abducible_atoms(program: OpenProgram, universe: Sequence) -> List[Atom]:
    atoms = []
    for name, arity in sorted(program.abducibles):
        for args in itertools.product(universe, repeat=arity):
            atoms.append(Atom(name, tuple(args)))
    return sorted_atoms(atoms)


def _minimal_abductions(
    program: OpenProgram,
    example: Atom,
    candidates: Sequence[Atom],
    limit: int,
    depth_bound: Optional[int],
) -> Iterator[Tuple[Atom, ...]]:
    """Yield minimal sets A of abducible atoms with B ∪ A ⊨ e, smallest first."""
    found: List[frozenset] = []
    for size in range(1, limit + 1):
        for chosen in itertools.combinations(candidates, size):
            as_set = frozenset(chosen)
            if any(previous <= as_set for previous in found):
                continue
            extended = program.background.union(Theory.facts(chosen))
            if entails_atom(extended, example, depth_bound=depth_bound):
                found.append(as_set)
                yield chosen


def _shared_constants(head: Atom, atom: Atom) -> int:
    head_terms = set(head.args)
    return sum(1 for arg in atom.args if arg in head_terms)


def _body_options(
    head: Atom, available: Sequence[Atom], max_literals: int
) -> List[List[frozenset]]:
    """Candidate bodies for a ground head, grouped by size."""
    pool = sorted_atoms(atom for atom in available if atom != head)
    grouped: List[List[frozenset]] = []
    for size in range(max_literals + 1):
        options = sorted(
            itertools.combinations(pool, size),
            key=lambda combo: (
                -sum(_shared_constants(head, atom) for atom in combo),
                tuple(atom.sort_key() for atom in combo),
            ),
        )
        grouped.append([frozenset(combo) for combo in options])
    return grouped


def _candidate_theories(
    heads: Sequence[Atom], available: Sequence[Atom], max_literals: int
) -> Iterator[Theory]:
    """Ground theories with one clause per head, fewest body literals first."""
    options = [_body_options(head, available, max_literals) for head in heads]
    shapes = sorted(
        itertools.product(range(max_literals + 1), repeat=len(heads)),
        key=lambda sizes: (sum(sizes), sizes),
    )
    for sizes in shapes:
        pools = [options[i][size] for i, size in enumerate(sizes)]
        for bodies in itertools.product(*pools):
            yield Theory(Clause(head, body) for head, body in zip(heads, bodies))


def _generalizations(clause: Clause, config: SearchConfig) -> List[Clause]:
    stream = (
        candidate
        for candidate in generalize_clause(clause, MAX_GENERALIZATIONS_SCANNED)
        if len(candidate.variables()) <= config.max_clause_vars
    )
    return list(itertools.islice(stream, config.generalization_budget))


def induce(
    program: OpenProgram,
    example: Atom,
    config: Optional[SearchConfig] = None,
    *,
    depth_bound: Optional[int] = None,
) -> List[Theory]:
    """
    Search for hypotheses H derivable from a connected theory by inverse subsumption.

    Connected theories are enumerated over minimal sets of abducible atoms,
    smallest first; each clause is generalized and every combination that is an
    inductive solution is returned, in discovery order.

    Returns:
        At most ``max_candidates`` theories; empty when none fits the bounds

    Raises:
        NonGroundError: If the example is not ground
        InductionError: If the example's predicate cannot be reached from U through B
    """
    config = config or SearchConfig()
    if not example.is_ground():
        raise NonGroundError(f"Example must be ground, got '{example}'")
    if example.signature not in _reachable_signatures(program):
        raise InductionError(
            f"Predicate {example.predicate}/{example.arity} is neither abducible "
            "nor derivable from an abducible through the background",
            details={"example": str(example)},
        )
    if entails_atom(program.background, example, depth_bound=depth_bound):
        logger.info(f"Background already entails {example}; nothing to induce")
        return []

    universe = universe_for(program, example, depth_bound=depth_bound)
    base_model = least_model(program.background, depth_bound=depth_bound, extra=[program, example])
    abducible = [atom for atom in _abducible_atoms(program, universe) if atom not in base_model]

    results: List[Theory] = []
    seen: Set[Theory] = set()
    examined = 0
    for heads in _minimal_abductions(
        program, example, abducible, config.max_theory_clauses, depth_bound
    ):
        extended = program.background.union(Theory.facts(heads))
        available = least_model(extended, depth_bound=depth_bound, extra=[example]).ordered()
        for theory in _candidate_theories(heads, available, config.max_body_literals):
            examined += 1
            try:
                layered = assign_layers(theory, program.background, depth_bound=depth_bound)
            except LayeredTheoryError:
                continue
            report = verify_connected_theory(program, example, layered, depth_bound=depth_bound)
            if not report.passed:
                continue
            choices = [_generalizations(clause, config) for clause in theory]
            for combo in itertools.product(*choices):
                hypothesis = Theory(combo)
                if hypothesis in seen:
                    continue
                seen.add(hypothesis)
                if check_inductive_solution(program, example, hypothesis, depth_bound=depth_bound):
                    results.append(hypothesis)
                    if len(results) >= config.max_candidates:
                        logger.info(f"Candidate cap reached after {examined} connected theories")
                        return results
    logger.info(f"Found {len(results)} hypotheses from {examined} connected theories")
    return results
