"""
Completeness harness: random inductive solutions must be CTIS-derivable.

Each instance is generated from its own seeded stream, pushed through the
connected-theory constructor and checked clause by clause. Instances may run
on a process pool; results are always assembled in index order and the run
stops at the first failing index with a counterexample bundle.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from apps.core.exceptions import LogicToolboxError, TheoremViolationError

from .generator import GeneratedInstance, GeneratorBounds, generate_instance, instance_rng
from .induction import CtisWitness, verify_ctis
from .parser import format_abducibles, format_layered_theory, format_theory
from .subsumption import apply_clause

logger = logging.getLogger(__name__)


@dataclass
class InstanceOutcome:
    """Result of one harness instance."""

    index: int
    ok: bool
    clauses: int = 0
    layers: int = 0
    reason: Optional[str] = None
    bundle: Dict[str, Any] = field(default_factory=dict)


@dataclass
class HarnessSummary:
    runs: int
    seed: int
    passed: int
    witnesses: int
    clauses: int
    max_layers: int
    multi_layer: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _instance_bundle(
    index: int,
    seed: int,
    instance: GeneratedInstance,
    witness: Optional[CtisWitness],
    reason: str,
    failing: Optional[str] = None,
) -> Dict[str, Any]:
    program = instance.program
    return {
        "index": index,
        "seed": seed,
        "reason": reason,
        "program": format_abducibles(program.abducibles) + format_theory(program.background),
        "constraints": "".join(f"{goal}\n" for goal in program.constraints),
        "example": str(instance.example),
        "hypothesis": format_theory(instance.hypothesis),
        "connected_theory": format_layered_theory(witness.theory) if witness else None,
        "failing_clause": failing,
    }


def _witness_problem(witness: CtisWitness) -> Optional[tuple]:
    """Return (reason, clause) for the first property the witness breaks."""
    if not witness.report.passed:
        failure = witness.report.failures[0] if witness.report.failures else None
        subject = failure.subject if failure else None
        return f"connected-theory condition failed: {witness.report.failed_conditions()}", subject
    for clause in witness.theory.union():
        if clause not in witness.subsumption_map:
            return "no subsuming hypothesis clause", str(clause)
        source, theta = witness.subsumption_map[clause]
        image = apply_clause(theta, source)
        if image.head != clause.head or not image.body <= clause.body:
            return "subsumption witness does not re-verify", str(clause)
        if clause not in witness.instance_map:
            return "clause is not an instance of the hypothesis", str(clause)
        if not witness.entailment_flags.get(clause, False):
            return "hypothesis does not entail clause", str(clause)
    return None


def check_instance(
    index: int, seed: int, bounds: Optional[GeneratorBounds] = None
) -> InstanceOutcome:
    """Generate instance ``index`` of run ``seed`` and check every harness property."""
    instance = generate_instance(instance_rng(seed, index), bounds)
    try:
        witness = verify_ctis(instance.program, instance.example, instance.hypothesis)
    except LogicToolboxError as e:
        reason = f"construction failed: {e}"
        return InstanceOutcome(
            index,
            False,
            reason=reason,
            bundle=_instance_bundle(index, seed, instance, None, reason),
        )
    problem = _witness_problem(witness)
    if problem is not None:
        reason, failing = problem
        return InstanceOutcome(
            index,
            False,
            clauses=len(witness.theory.union()),
            layers=witness.theory.n,
            reason=reason,
            bundle=_instance_bundle(index, seed, instance, witness, reason, failing),
        )
    return InstanceOutcome(
        index, True, clauses=len(witness.theory.union()), layers=witness.theory.n
    )


def _write_bundle(bundle: Dict[str, Any], directory: str) -> Path:
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    path = target / f"counterexample-seed{bundle['seed']}-{bundle['index']}.json"
    path.write_text(json.dumps(bundle, indent=2, sort_keys=True), encoding="utf-8")
    return path


def _outcomes(
    runs: int, seed: int, workers: int, bounds: Optional[GeneratorBounds]
) -> Iterable[InstanceOutcome]:
    indices = range(runs)
    if workers <= 1:
        return (check_instance(i, seed, bounds) for i in indices)
    executor = ProcessPoolExecutor(max_workers=workers)
    results = executor.map(check_instance, indices, [seed] * runs, [bounds] * runs, chunksize=16)

    def ordered() -> Iterable[InstanceOutcome]:
        try:
            yield from results
        finally:
            executor.shutdown(wait=True, cancel_futures=True)

    return ordered()


def run_theorem_harness(
    runs: int,
    seed: int,
    *,
    workers: int = 1,
    bounds: Optional[GeneratorBounds] = None,
    counterexample_dir: Optional[str] = None,
) -> HarnessSummary:
    """
    Run ``runs`` generated instances and require total subsumption witnesses.

    Raises:
        TheoremViolationError: On the first failing instance, carrying its bundle
    """
    outcomes: List[InstanceOutcome] = []
    for outcome in _outcomes(runs, seed, workers, bounds):
        if not outcome.ok:
            logger.error(f"Harness instance {outcome.index} failed: {outcome.reason}")
            if counterexample_dir:
                path = _write_bundle(outcome.bundle, counterexample_dir)
                logger.info(f"Counterexample written to {path}")
            raise TheoremViolationError(
                f"Instance {outcome.index} (seed {seed}) violates the subsumption property: "
                f"{outcome.reason}",
                bundle=outcome.bundle,
            )
        outcomes.append(outcome)
        if (outcome.index + 1) % 100 == 0:
            logger.info(f"Harness progress: {outcome.index + 1}/{runs} instances")

    summary = HarnessSummary(
        runs=runs,
        seed=seed,
        passed=len(outcomes),
        witnesses=len(outcomes),
        clauses=sum(o.clauses for o in outcomes),
        max_layers=max((o.layers for o in outcomes), default=0),
        multi_layer=sum(1 for o in outcomes if o.layers > 1),
    )
    logger.info(f"Harness finished: {summary.passed}/{runs} instances with total witnesses")
    return summary
