"""
Tests for the instance generator and the completeness harness.
"""

import json
import random

import pytest

from apps.core.exceptions import TheoremViolationError
from apps.logic.entailment import entails_atom
from apps.logic.generator import (
    GeneratorBounds,
    generate_instance,
    instance_rng,
    random_clause_pair,
    random_program,
)
from apps.logic.harness import check_instance, run_theorem_harness
from apps.logic.induction import check_inductive_solution
from apps.logic.oracle import herbrand_base_size
from apps.logic.terms import Compound, signature_of


class TestGenerator:
    """Test the seeded generators."""

    def test_instance_is_inductive_solution(self):
        """Generated hypotheses explain an example the background cannot."""
        for index in range(10):
            instance = generate_instance(instance_rng(7, index))
            program = instance.program
            assert check_inductive_solution(program, instance.example, instance.hypothesis)
            assert not entails_atom(program.background, instance.example)

    def test_hypothesis_heads_are_abducible(self):
        """Only hypothesis clauses define abducible predicates."""
        for index in range(10):
            instance = generate_instance(instance_rng(3, index))
            program = instance.program
            assert all(program.is_abducible(c.head) for c in instance.hypothesis)
            assert not any(program.is_abducible(c.head) for c in program.background)

    def test_same_seed_same_instance(self):
        """Streams are reproducible per (seed, index)."""
        first = generate_instance(instance_rng(11, 4))
        second = generate_instance(instance_rng(11, 4))
        assert first.hypothesis == second.hypothesis
        assert first.example == second.example

    def test_bounds(self):
        """Signature limits are respected."""
        bounds = GeneratorBounds(max_predicates=3, max_arity=1, max_constants=2)
        instance = generate_instance(random.Random(5), bounds)
        clauses = [*instance.program.background, *instance.hypothesis]
        atoms = [a for c in clauses for a in (c.head, *c.body)]
        assert len({a.predicate for a in atoms}) <= 3
        assert all(a.arity <= 1 for a in atoms)

    def test_random_program_base(self):
        """Random programs stay within the oracle's base size."""
        for seed in range(20):
            assert herbrand_base_size(random_program(random.Random(seed))) <= 12

    def test_random_clause_pair_signature(self):
        """Pairs only use the function symbol f/1 and the constants a and b."""
        for seed in range(20):
            constants, functors = signature_of(*random_clause_pair(random.Random(seed)))
            assert set(constants) <= {Compound("a"), Compound("b")}
            assert set(functors) <= {("f", 1)}


class TestTheoremHarness:
    """Test the harness run."""

    def test_single_instance(self):
        """An instance passes every harness property."""
        outcome = check_instance(0, 7)
        assert outcome.ok, outcome.reason
        assert outcome.clauses >= 1
        assert outcome.layers >= 1

    def test_small_run(self):
        """Every instance of a short run has a total witness map."""
        summary = run_theorem_harness(25, 7)
        assert summary.runs == 25
        assert summary.passed == 25
        assert summary.witnesses == 25
        assert summary.max_layers >= 1

    def test_deterministic(self):
        """The same seed gives the same summary."""
        assert run_theorem_harness(10, 3).to_dict() == run_theorem_harness(10, 3).to_dict()

    @pytest.mark.slow
    def test_process_pool_matches_sequential(self):
        """Workers change scheduling, never results."""
        sequential = run_theorem_harness(12, 5)
        pooled = run_theorem_harness(12, 5, workers=2)
        assert pooled.to_dict() == sequential.to_dict()

    def test_violation_writes_bundle(self, mocker, tmp_path):
        """A failing instance aborts the run with a counterexample bundle."""
        mocker.patch(
            "apps.logic.harness._witness_problem",
            return_value=("forced failure", "p0(c0)."),
        )
        with pytest.raises(TheoremViolationError) as exc_info:
            run_theorem_harness(5, 7, counterexample_dir=str(tmp_path))
        bundle = exc_info.value.bundle
        assert bundle["index"] == 0
        assert bundle["seed"] == 7
        assert bundle["failing_clause"] == "p0(c0)."
        assert exc_info.value.exit_code == 1

        written = json.loads((tmp_path / "counterexample-seed7-0.json").read_text())
        assert written["reason"] == "forced failure"
        assert written["hypothesis"]

    @pytest.mark.slow
    def test_five_hundred_instances(self):
        """Five hundred generated solutions all have total subsumption witnesses."""
        summary = run_theorem_harness(500, 7)
        assert summary.passed == 500
        assert summary.multi_layer > 0
