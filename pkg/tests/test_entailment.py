"""
Tests for least models, entailment and consistency.
"""

import pytest

from apps.core.exceptions import InfiniteUniverseError, NonGroundError, NotEntailedError
from apps.logic.entailment import (
    constraint_violations,
    entails_atom,
    entails_ground_clause,
    goal_matches,
    ground_support,
    is_consistent,
    least_model,
)
from apps.logic.parser import parse_atom, parse_clause, parse_constraints

from .helpers import theory

PATHS = theory(
    "e(a, b).",
    "e(b, c).",
    "r(X, Y) :- e(X, Y).",
    "r(X, Z) :- e(X, Y), r(Y, Z).",
)


class TestLeastModel:
    """Test the fixpoint computation."""

    def test_transitive_closure(self):
        """Paths are derived through the recursive rule."""
        model = least_model(PATHS)
        assert parse_atom("r(a, c)") in model
        assert len(model) == 5

    def test_depths(self):
        """Facts sit at depth 1; each rule firing adds one."""
        model = least_model(theory("q.", "p :- q."))
        assert model.depth[parse_atom("q")] == 1
        assert model.depth[parse_atom("p")] == 2
        assert least_model(PATHS).depth[parse_atom("r(a, c)")] == 3

    def test_provenance_is_ground_instance(self):
        """Each derived atom records the clause instance that produced it."""
        model = least_model(theory("q.", "p :- q."))
        assert str(model.provenance[parse_atom("p")]) == "p :- q."
        assert str(least_model(PATHS).provenance[parse_atom("r(a, c)")]) == (
            "r(a,c) :- e(a,b), r(b,c)."
        )

    def test_unsupported_rule_derives_nothing(self):
        """{p :- q} has the empty model."""
        assert len(least_model(theory("p :- q."))) == 0

    def test_non_range_restricted_fact(self):
        """Head variables range over the universe."""
        model = least_model(theory("p(X).", "q(a).", "q(b)."))
        assert {parse_atom("p(a)"), parse_atom("p(b)")} <= model.atoms

    def test_extra_symbols_join_universe(self):
        """Symbols of extra expressions widen the universe."""
        model = least_model(theory("p(X)."), extra=[parse_atom("q(c)")])
        assert parse_atom("p(c)") in model

    def test_ordered_by_depth(self):
        """ordered() lists shallow atoms first."""
        model = least_model(theory("p :- q.", "q."))
        assert [str(a) for a in model.ordered()] == ["q", "p"]
        assert model.max_depth() == 2

    def test_function_symbols_need_bound(self):
        """Without a bound, function symbols are refused."""
        with pytest.raises(InfiniteUniverseError):
            least_model(theory("p(a).", "p(f(X)) :- p(X)."))

    def test_depth_bound_truncates(self):
        """Atoms deeper than the bound are not derived."""
        model = least_model(theory("p(a).", "p(f(X)) :- p(X)."), depth_bound=2)
        assert [str(a) for a in model.ordered()] == ["p(a)", "p(f(a))", "p(f(f(a)))"]


class TestEntailment:
    """Test atom and clause entailment."""

    def test_entails_atom(self):
        """Membership in the least model decides entailment."""
        program = theory("bird(a).", "flies(X) :- bird(X).")
        assert entails_atom(program, parse_atom("flies(a)"))
        assert not entails_atom(program, parse_atom("flies(b)"))

    def test_query_must_be_ground(self):
        """Entailment queries are ground."""
        with pytest.raises(NonGroundError):
            entails_atom(theory("p(a)."), parse_atom("p(X)"))

    def test_entails_ground_clause(self):
        """T entails D when T plus D's body facts derives D's head."""
        program = theory("p(X) :- q(X).")
        assert entails_ground_clause(program, parse_clause("p(a) :- q(a), r(a)."))
        assert not entails_ground_clause(program, parse_clause("p(a) :- r(a)."))

    def test_entailment_without_subsumption(self):
        """p(f(X)) :- p(X) entails p(f(f(a))) :- p(a) given depth 2, not depth 1."""
        program = theory("p(f(X)) :- p(X).")
        clause = parse_clause("p(f(f(a))) :- p(a).")
        assert entails_ground_clause(program, clause, depth_bound=2)
        assert not entails_ground_clause(program, clause, depth_bound=1)
        with pytest.raises(InfiniteUniverseError):
            entails_ground_clause(program, clause)

    def test_clause_must_be_ground(self):
        """Clause entailment is decided for ground clauses only."""
        with pytest.raises(NonGroundError):
            entails_ground_clause(theory("p(a)."), parse_clause("p(X) :- q(X)."))


class TestConsistency:
    """Test integrity constraint checks."""

    def test_violated_constraint(self):
        """B = {p(a)} with I = {:- p(X)} is inconsistent."""
        goals = parse_constraints(":- p(X).")
        assert not is_consistent(theory("p(a)."), theory(), goals)
        violations = constraint_violations(theory("p(a)."), theory(), goals)
        assert [(str(g), [str(a) for a in atoms]) for g, atoms in violations] == [
            (":- p(X).", ["p(a)"])
        ]

    def test_hypothesis_counts_towards_consistency(self):
        """Constraints are checked in M(B ∪ H)."""
        goals = parse_constraints(":- p(b).")
        hypothesis = theory("p(X) :- q(X).")
        assert is_consistent(theory("q(a)."), hypothesis, goals)
        assert not is_consistent(theory("q(a).", "q(b)."), hypothesis, goals)

    def test_no_constraints(self):
        """An empty I is always satisfied."""
        assert is_consistent(theory("p(a)."), theory(), ())

    def test_goal_matches_joins_literals(self):
        """Only groundings with every literal true are produced."""
        model = least_model(theory("p(a).", "q(a).", "q(b)."))
        (goal,) = parse_constraints(":- p(X), q(X).")
        matches = [[str(a) for a in m] for m in goal_matches(goal, model)]
        assert matches == [["p(a)", "q(a)"]]


class TestGroundSupport:
    """Test support extraction."""

    def test_support_follows_derivation(self):
        """The support holds exactly the instances used to derive the atom."""
        program = theory("bird(a).", "bird(b).", "flies(X) :- bird(X).")
        support = ground_support(program, parse_atom("flies(a)"))
        assert [str(c) for c in support] == ["bird(a).", "flies(a) :- bird(a)."]

    def test_support_entails_atom(self):
        """The support alone derives the atom."""
        support = ground_support(PATHS, parse_atom("r(a, c)"))
        assert support.is_ground()
        assert entails_atom(support, parse_atom("r(a, c)"))

    def test_not_entailed(self):
        """No support exists for an atom outside the model."""
        with pytest.raises(NotEntailedError):
            ground_support(theory("p(a)."), parse_atom("p(b)"))
