"""
Layered connected theories: type, verifier and constructor.

A layered theory T1, ..., Tn of ground clauses is connected for an open program
<B, U, I> and a ground atom e when B entails the bodies of Tn, the heads of the
deeper layers entail the bodies of each shallower layer, all heads together
with B entail e, and B ∪ T ∪ I is consistent. The clauses must also define only
abducible predicates; that flag is reported on its own.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from apps.core.exceptions import (
    DegenerateTheoryError,
    LayeredTheoryError,
    NonGroundError,
    NotEntailedError,
    PreconditionError,
)

from .entailment import constraint_violations, entails_atom, ground_support, least_model
from .subsumption import is_instance
from .terms import Atom, Clause, OpenProgram, Theory, sorted_atoms, theory_bodies, theory_heads

logger = logging.getLogger(__name__)

CONDITION_BASE = "base"
CONDITION_CHAIN = "chain"
CONDITION_EXAMPLE = "example"
CONDITION_CONSISTENT = "consistent"
CONDITION_ABDUCIBLE = "abducible"


@dataclass(frozen=True)
class LayeredTheory:
    """An ordered partition T1, ..., Tn (n >= 1) of a ground theory; Tn is the base layer."""

    layers: Tuple[Theory, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise LayeredTheoryError("A layered theory needs at least one layer")
        seen: Dict[str, int] = {}
        for number, layer in enumerate(self.layers, start=1):
            if not layer:
                raise LayeredTheoryError(
                    f"Layer {number} is empty; every layer needs a clause",
                    details={"layer": number},
                )
            for clause in layer:
                if not clause.is_ground():
                    raise NonGroundError(
                        f"Layer {number} holds non-ground clause '{clause}'",
                        details={"layer": number, "clause": str(clause)},
                    )
                if clause.variant_key in seen:
                    raise LayeredTheoryError(
                        f"Clause '{clause}' appears in layers {seen[clause.variant_key]} "
                        f"and {number}; layers must be disjoint",
                        details={"clause": str(clause)},
                    )
                seen[clause.variant_key] = number

    @property
    def n(self) -> int:
        return len(self.layers)

    def layer(self, number: int) -> Theory:
        """Return layer T_number (1-based)."""
        return self.layers[number - 1]

    def union(self) -> Theory:
        return Theory(clause for layer in self.layers for clause in layer)

    def clauses(self) -> List[Clause]:
        return list(self.union())


@dataclass(frozen=True)
class ConditionFailure:
    condition: str
    subject: str


@dataclass
class VerificationReport:
    """Outcome of each connected-theory condition with the offending items."""

    condition_base: bool
    condition_chain: List[bool]
    condition_example: bool
    condition_consistent: bool
    condition_abducible: bool
    failures: List[ConditionFailure] = field(default_factory=list)

    @property
    def connected(self) -> bool:
        """The four bullet conditions, abducible flag excluded."""
        return (
            self.condition_base
            and all(self.condition_chain)
            and self.condition_example
            and self.condition_consistent
        )

    @property
    def passed(self) -> bool:
        return self.connected and self.condition_abducible

    def failed_conditions(self) -> List[str]:
        names = []
        if not self.condition_base:
            names.append(CONDITION_BASE)
        if not all(self.condition_chain):
            names.append(CONDITION_CHAIN)
        if not self.condition_example:
            names.append(CONDITION_EXAMPLE)
        if not self.condition_consistent:
            names.append(CONDITION_CONSISTENT)
        if not self.condition_abducible:
            names.append(CONDITION_ABDUCIBLE)
        return names

    def to_dict(self) -> Dict[str, object]:
        return {
            "passed": self.passed,
            "connected": self.connected,
            "condition_base": self.condition_base,
            "condition_chain": list(self.condition_chain),
            "condition_example": self.condition_example,
            "condition_consistent": self.condition_consistent,
            "condition_abducible": self.condition_abducible,
            "failures": [
                {"condition": failure.condition, "subject": failure.subject}
                for failure in self.failures
            ],
        }


def verify_connected_theory(
    program: OpenProgram,
    example: Atom,
    layered: LayeredTheory,
    *,
    depth_bound: Optional[int] = None,
) -> VerificationReport:
    """
    Evaluate every connected-theory condition for a layered theory.

    Raises:
        NonGroundError: If the example or a layer clause is not ground
    """
    if not example.is_ground():
        raise NonGroundError(f"Example must be ground, got '{example}'")
    for clause in layered.union():
        if not clause.is_ground():
            raise NonGroundError(f"Layered theory holds non-ground clause '{clause}'")

    background = program.background
    union = layered.union()
    extra = [example, union, *program.constraints]
    failures: List[ConditionFailure] = []

    base_model = least_model(background, depth_bound=depth_bound, extra=extra)
    missing = [a for a in sorted_atoms(theory_bodies(layered.layers[-1])) if a not in base_model]
    for atom in missing:
        failures.append(ConditionFailure(CONDITION_BASE, str(atom)))

    chain: List[bool] = []
    for i in range(1, layered.n):
        deeper_heads = theory_heads(c for layer in layered.layers[i:] for c in layer)
        model = least_model(
            background.union(Theory.facts(deeper_heads)), depth_bound=depth_bound, extra=extra
        )
        gaps = [a for a in sorted_atoms(theory_bodies(layered.layer(i))) if a not in model]
        for atom in gaps:
            failures.append(ConditionFailure(f"{CONDITION_CHAIN}[{i}]", str(atom)))
        chain.append(not gaps)

    all_heads = theory_heads(union)
    full_model = least_model(
        background.union(Theory.facts(all_heads)), depth_bound=depth_bound, extra=extra
    )
    example_ok = example in full_model
    if not example_ok:
        failures.append(ConditionFailure(CONDITION_EXAMPLE, str(example)))

    violations = constraint_violations(
        background, union, program.constraints, depth_bound=depth_bound
    )
    for goal, grounding in violations:
        witness = ", ".join(str(atom) for atom in grounding)
        failures.append(ConditionFailure(CONDITION_CONSISTENT, f"{goal} violated by {witness}"))

    foreign = [clause for clause in union if not program.is_abducible(clause.head)]
    for clause in foreign:
        failures.append(ConditionFailure(CONDITION_ABDUCIBLE, str(clause)))

    report = VerificationReport(
        condition_base=not missing,
        condition_chain=chain,
        condition_example=example_ok,
        condition_consistent=not violations,
        condition_abducible=not foreign,
        failures=failures,
    )
    logger.debug(f"Verified {layered.n}-layered theory for {example}: {report.failed_conditions()}")
    return report


def assign_layers(
    theory: Iterable[Clause],
    background: Iterable[Clause],
    *,
    depth_bound: Optional[int] = None,
) -> LayeredTheory:
    """
    Partition a ground theory into layers by firing depth in M(B ∪ T).

    A clause fires at 1 + the largest depth of its body atoms (1 for facts),
    which is its head's depth when the clause is that head's provenance.
    Distinct depths are ranked deepest-first, so layer n holds the clauses
    whose bodies B alone entails and clauses of equal depth share a layer.

    Raises:
        LayeredTheoryError: If the theory is empty or a clause never fires
    """
    clauses = list(Theory(theory))
    if not clauses:
        raise LayeredTheoryError("Cannot layer an empty theory; n >= 1 is required")
    for clause in clauses:
        if not clause.is_ground():
            raise NonGroundError(f"Only ground clauses can be layered, got '{clause}'")
    model = least_model(
        Theory(background).union(Theory(clauses)), depth_bound=depth_bound, extra=clauses
    )
    firing: Dict[str, int] = {}
    for clause in clauses:
        if any(atom not in model for atom in clause.body):
            raise LayeredTheoryError(
                f"Clause '{clause}' is never used: its body is not derivable",
                details={"clause": str(clause)},
            )
        firing[clause.variant_key] = 1 + max((model.depth[a] for a in clause.body), default=0)
    depths = sorted(set(firing.values()), reverse=True)
    rank = {depth: number for number, depth in enumerate(depths, start=1)}
    layers: List[List[Clause]] = [[] for _ in depths]
    for clause in sorted(clauses, key=lambda c: (firing[c.variant_key], c.sort_key())):
        layers[rank[firing[clause.variant_key]] - 1].append(clause)
    return LayeredTheory(tuple(Theory(layer) for layer in layers))


@dataclass(frozen=True)
class Construction:
    """A constructed connected theory with its support set and instance witnesses."""

    layered: LayeredTheory
    support: Theory
    instances: Dict[Clause, Tuple[Clause, object]]


def build_connected_theory(
    program: OpenProgram,
    hypothesis: Theory,
    example: Atom,
    *,
    depth_bound: Optional[int] = None,
) -> Construction:
    """
    Construct T = S ∩ ground(H) from a ground support S of e in B ∪ H and layer it.

    Raises:
        PreconditionError: If B ∪ H does not entail e or B ∪ H ∪ I is inconsistent
        DegenerateTheoryError: If no hypothesis instance is used to derive e
    """
    combined = program.background.union(hypothesis)
    if not entails_atom(combined, example, depth_bound=depth_bound):
        raise NotEntailedError(f"B ∪ H does not entail '{example}'")
    violations = constraint_violations(
        program.background, hypothesis, program.constraints, depth_bound=depth_bound
    )
    if violations:
        goal, _ = violations[0]
        raise PreconditionError(f"B ∪ H ∪ I is inconsistent: {goal} is violated")

    support = ground_support(combined, example, depth_bound=depth_bound)
    selected: List[Clause] = []
    instances: Dict[Clause, Tuple[Clause, object]] = {}
    for clause in support:
        for candidate in hypothesis:
            theta = is_instance(candidate, clause)
            if theta is not None:
                selected.append(clause)
                instances[clause] = (candidate, theta)
                break
    if not selected:
        raise DegenerateTheoryError(
            f"'{example}' is derived without any hypothesis clause; "
            "no connected theory with n >= 1 arises from this construction"
        )
    layered = assign_layers(selected, program.background, depth_bound=depth_bound)
    logger.info(
        f"Constructed {layered.n}-layered theory with {len(selected)} clauses "
        f"from a support of {len(support)}"
    )
    return Construction(layered=layered, support=support, instances=instances)


def construct_connected_theory(
    program: OpenProgram,
    hypothesis: Theory,
    example: Atom,
    *,
    depth_bound: Optional[int] = None,
) -> LayeredTheory:
    """Return the layered theory T = S ∩ ground(H) for an inductive solution H."""
    return build_connected_theory(program, hypothesis, example, depth_bound=depth_bound).layered
